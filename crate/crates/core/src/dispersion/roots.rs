use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 200;

/// Root of `f` inside `[a, b]` (which must bracket a sign change), to an
/// interval width of `tol`.
///
/// Each iteration tries a secant step from the bracket ends and falls back to
/// bisection when the step leaves the bracket or shrinks it too little.
pub fn bracketed_root(f: &impl Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::invalid(format!("[{a}, {b}] does not bracket a root")));
    }
    let mut use_secant = true;
    for _ in 0..MAX_ITERATIONS {
        let width = b - a;
        if width <= tol {
            break;
        }
        let mut x = 0.5 * (a + b);
        let mut secant_step = false;
        if use_secant {
            let s = b - fb * (b - a) / (fb - fa);
            if s > a && s < b {
                x = s;
                secant_step = true;
            }
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        // a secant step that fails to halve the bracket is followed by a bisection
        use_secant = !secant_step || (b - a) < 0.5 * width;
    }
    // final secant interpolation inside the tolerance bracket
    let s = b - fb * (b - a) / (fb - fa);
    Ok(if s >= a && s <= b { s } else { 0.5 * (a + b) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let f = |x: f64| Ok(x * x * x - 2.0);
        let r = bracketed_root(&f, 0.0, 3.0, 1e-12).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-11);
    }

    #[test]
    fn rejects_non_bracket() {
        let f = |x: f64| Ok(x * x + 1.0);
        assert!(bracketed_root(&f, -1.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn handles_flat_tails() {
        let f = |x: f64| Ok((x - 0.3).tanh().powi(3));
        let r = bracketed_root(&f, -5.0, 5.0, 1e-9).unwrap();
        assert!((r - 0.3).abs() < 1e-8);
    }
}
