//! Small numerical kernels shared by the physics modules.

use num_complex::Complex64;

/// Finds a root of `f` in `[lo, hi]` where `f(lo)` and `f(hi)` differ in sign.
///
/// Secant steps are taken whenever they land strictly inside the current
/// bracket, otherwise the bracket is bisected. Stops when the bracket is
/// narrower than `rel_tol * |x|`.
pub(crate) fn bracketed_root(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
) -> Option<f64> {
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        if f_lo == 0.0 {
            return Some(lo);
        }
        if f_hi == 0.0 {
            return Some(hi);
        }
        return None;
    }
    for iter in 0..400 {
        let width = hi - lo;
        if width <= rel_tol * lo.abs().max(hi.abs()) {
            break;
        }
        let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        // alternate with plain bisection so one-sided secant stalls cannot occur
        let x = if iter % 3 != 2 && secant > lo && secant < hi {
            secant
        } else {
            0.5 * (lo + hi)
        };
        let fx = f(x);
        if fx == 0.0 {
            return Some(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
    }
    // return the endpoint with the smaller residual
    Some(if f_lo.abs() < f_hi.abs() { lo } else { hi })
}

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Composite five-point Gauss-Legendre quadrature of `f` over `[a, b]`.
pub(crate) fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        let mut s = 0.0;
        for (x, w) in GL5_NODES.iter().zip(GL5_WEIGHTS.iter()) {
            s += w * f(mid + half * x);
        }
        sum += s * half;
    }
    sum
}

/// `exp(w) - 1` without cancellation for small `|w|`.
pub(crate) fn expm1(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        // Horner form of w + w²/2 + w³/6 + w⁴/24 + w⁵/120
        w * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0 + w / 120.0))))
    } else {
        w.exp() - 1.0
    }
}

/// Solves the dense system `m · x = rhs` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot vanishes relative to the matrix scale.
pub(crate) fn solve_linear<const N: usize>(
    mut m: [[Complex64; N]; N],
    mut rhs: [Complex64; N],
) -> Option<[Complex64; N]> {
    let scale = m
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0_f64, |acc, z| acc.max(z.norm()));
    if !(scale.is_finite() && scale > 0.0) {
        return None;
    }
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .unwrap();
        if m[pivot][col].norm() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..N {
            let factor = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (v, p) in m[row].iter_mut().zip(pivot_row).skip(col) {
                *v -= factor * p;
            }
            let sub = factor * rhs[col];
            rhs[row] -= sub;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); N];
    for row in (0..N).rev() {
        let mut acc = rhs[row];
        for k in row + 1..N {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Some(x)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_of_quadratic() {
        let r = bracketed_root(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn no_sign_change_is_none() {
        assert!(bracketed_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn gauss_legendre_polynomial_exact() {
        // five nodes integrate degree-9 polynomials exactly
        let v = gauss_legendre(|x| x.powi(9) + x.powi(4), 0.0, 1.0, 1);
        assert!((v - (0.1 + 0.2)).abs() < 1e-15);
    }

    #[test]
    fn expm1_small_and_large() {
        let w = Complex64::new(1e-9, -2e-9);
        let e = expm1(w);
        assert!((e - w).norm() < 1e-17);
        let w = Complex64::new(0.3, 0.2);
        assert!((expm1(w) - (w.exp() - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_small_system() {
        let c = |re| Complex64::new(re, 0.0);
        let m = [[c(2.0), c(1.0)], [c(1.0), c(3.0)]];
        let x = solve_linear(m, [c(3.0), c(5.0)]).unwrap();
        assert!((x[0] - c(0.8)).norm() < 1e-15);
        assert!((x[1] - c(1.4)).norm() < 1e-15);
        assert!(solve_linear([[c(1.0), c(2.0)], [c(2.0), c(4.0)]], [c(1.0), c(1.0)]).is_none());
    }
}
