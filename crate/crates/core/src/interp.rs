//! Linear and bilinear interpolation on rectilinear (not necessarily uniform) grids.

/// Index `k` with `axis[k] <= x <= axis[k + 1]` and the fractional position,
/// or `None` outside the axis.
pub fn locate(axis: &[f64], x: f64) -> Option<(usize, f64)> {
    let n = axis.len();
    if n < 2 || !(x >= axis[0] && x <= axis[n - 1]) {
        return None;
    }
    let k = match axis.partition_point(|&a| a <= x) {
        0 => 0,
        p if p >= n => n - 2,
        p => p - 1,
    };
    let t = (x - axis[k]) / (axis[k + 1] - axis[k]);
    Some((k, t))
}

pub fn linear(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    let (k, t) = locate(xs, x)?;
    Some(ys[k] + t * (ys[k + 1] - ys[k]))
}

/// Flat indices and weights of the four nodes around `(r, c)` in a
/// row-major `rows.len() x cols.len()` table.
pub fn bilinear_stencil(rows: &[f64], cols: &[f64], r: f64, c: f64) -> Option<[(usize, f64); 4]> {
    let (i, u) = locate(rows, r)?;
    let (j, v) = locate(cols, c)?;
    let nc = cols.len();
    Some([
        (i * nc + j, (1.0 - u) * (1.0 - v)),
        (i * nc + j + 1, (1.0 - u) * v),
        ((i + 1) * nc + j, u * (1.0 - v)),
        ((i + 1) * nc + j + 1, u * v),
    ])
}

/// Bilinear interpolation of a row-major `rows.len() x cols.len()` table.
pub fn bilinear(rows: &[f64], cols: &[f64], values: &[f64], r: f64, c: f64) -> Option<f64> {
    Some(bilinear_stencil(rows, cols, r, c)?.iter().map(|&(k, w)| w * values[k]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locate_edges() {
        let a = [0.0, 1.0, 3.0];
        assert_eq!(locate(&a, 0.0), Some((0, 0.0)));
        assert_eq!(locate(&a, 3.0), Some((1, 1.0)));
        assert_eq!(locate(&a, 2.0), Some((1, 0.5)));
        assert_eq!(locate(&a, -0.1), None);
        assert_eq!(locate(&a, f64::NAN), None);
    }

    #[test]
    fn bilinear_reproduces_planes() {
        let rows = [0.0, 0.5, 2.0];
        let cols = [1.0, 2.0, 4.0, 5.0];
        let f = |r: f64, c: f64| 3.0 * r - 2.0 * c + 0.25;
        let values: Vec<f64> = rows.iter().flat_map(|&r| cols.iter().map(move |&c| f(r, c))).collect();
        for (r, c) in [(0.1, 1.1), (1.7, 4.9), (2.0, 5.0), (0.0, 1.0)] {
            let got = bilinear(&rows, &cols, &values, r, c).unwrap();
            assert!((got - f(r, c)).abs() < 1e-12);
        }
        assert!(bilinear(&rows, &cols, &values, 2.1, 3.0).is_none());
    }
}
