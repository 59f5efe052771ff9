//! Nelder-Mead descent inside the unit box.

use crate::error::Result;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SimplexOptions {
    pub max_evaluations: usize,
    /// Relative improvement of the best value over one cycle of `n + 1`
    /// iterations below which the descent stops.
    pub tolerance: f64,
    /// Initial edge length in box units.
    pub initial_step: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct SimplexOutcome {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimum simplex diameter (box units) for the improvement test to count.
const MIN_SPREAD: f64 = 1e-9;

fn clamp_unit(x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
}

fn spread(simplex: &[Vec<f64>]) -> f64 {
    let best = &simplex[0];
    simplex[1..]
        .iter()
        .map(|v| v.iter().zip(best).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

pub(crate) fn minimize(f: &impl Fn(&[f64]) -> Result<f64>, start: &[f64], opts: SimplexOptions) -> Result<SimplexOutcome> {
    let n = start.len();
    let evaluations = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| -> Result<f64> {
        evaluations.set(evaluations.get() + 1);
        f(x)
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut x0 = start.to_vec();
    clamp_unit(&mut x0);
    simplex.push(x0.clone());
    for i in 0..n {
        let mut v = x0.clone();
        v[i] = if v[i] + opts.initial_step <= 1.0 { v[i] + opts.initial_step } else { v[i] - opts.initial_step };
        simplex.push(v);
    }
    let mut values = Vec::with_capacity(n + 1);
    for v in &simplex {
        values.push(eval(v)?);
    }

    let mut iteration = 0usize;
    let mut cycle_best = f64::INFINITY;
    let mut converged = false;
    loop {
        // Sort ascending; ties resolved by vertex coordinates for determinism.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| {
            values[a].total_cmp(&values[b]).then_with(|| {
                simplex[a].iter().zip(&simplex[b]).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
            })
        });
        simplex = order.iter().map(|&k| simplex[k].clone()).collect();
        values = order.iter().map(|&k| values[k]).collect();

        if iteration.is_multiple_of(n + 1) {
            let best = values[0];
            if iteration > 0 {
                let improvement = cycle_best - best;
                let stalled = improvement <= opts.tolerance * cycle_best.abs() && spread(&simplex) < MIN_SPREAD;
                if stalled || best == 0.0 {
                    converged = true;
                    break;
                }
            }
            cycle_best = best;
        }
        if evaluations.get() >= opts.max_evaluations {
            break;
        }
        iteration += 1;

        let worst = n;
        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            let mut p: Vec<f64> = centroid.iter().zip(&simplex[worst]).map(|(c, w)| c + t * (c - w)).collect();
            clamp_unit(&mut p);
            p
        };

        let reflected = along(1.0);
        let fr = eval(&reflected)?;
        if fr < values[0] {
            let expanded = along(2.0);
            let fe = eval(&expanded)?;
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[worst] = reflected;
            values[worst] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[worst] {
            let p = along(0.5);
            let v = eval(&p)?;
            (p, v)
        } else {
            let p = along(-0.5);
            let v = eval(&p)?;
            (p, v)
        };
        if fc < values[worst].min(fr) {
            simplex[worst] = contracted;
            values[worst] = fc;
            continue;
        }
        // Shrink towards the best vertex.
        for k in 1..=n {
            let p: Vec<f64> = simplex[0].iter().zip(&simplex[k]).map(|(b, x)| b + 0.5 * (x - b)).collect();
            values[k] = eval(&p)?;
            simplex[k] = p;
        }
    }
    Ok(SimplexOutcome { point: simplex[0].clone(), value: values[0], evaluations: evaluations.get(), converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SimplexOptions {
        SimplexOptions { max_evaluations: 100_000, tolerance: 1e-10, initial_step: 0.1 }
    }

    #[test]
    fn finds_quadratic_minimum() {
        let f = |x: &[f64]| Ok((x[0] - 0.3).powi(2) + 10.0 * (x[1] - 0.7).powi(2) + 1.0);
        let r = minimize(&f, &[0.5, 0.5], opts()).unwrap();
        assert!(r.converged);
        assert!((r.point[0] - 0.3).abs() < 1e-5 && (r.point[1] - 0.7).abs() < 1e-5, "{:?}", r.point);
    }

    #[test]
    fn respects_box() {
        let f = |x: &[f64]| Ok((x[0] + 1.0).powi(2));
        let r = minimize(&f, &[0.5], opts()).unwrap();
        assert!(r.point[0].abs() < 1e-9);
    }

    #[test]
    fn evaluation_cap() {
        let f = |x: &[f64]| Ok((x[0] - 0.3).powi(2) + (x[1] - 0.2).powi(2) + 1.0);
        let r = minimize(&f, &[0.9, 0.9], SimplexOptions { max_evaluations: 10, ..opts() }).unwrap();
        assert!(!r.converged);
        assert!(r.evaluations <= 12);
    }
}
