//! Limits of sequences: polynomial extrapolation of regulated quantities to
//! zero regulator, and Wynn's epsilon algorithm for partial sums.

use num_complex::Complex;

use super::Tolerance;
use crate::error::{Error, Result};
use crate::Real;

/// Decreasing regulator values and the polynomial degree fitted through
/// the smallest of them.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsSchedule<R> {
    eps_values: Vec<R>,
    order: usize,
}

impl<R: Real> EpsSchedule<R> {
    pub fn new(eps_values: Vec<R>, order: usize) -> Result<Self> {
        if eps_values.is_empty() || eps_values.iter().any(|&e| !(e > R::zero())) {
            return Err(Error::InvalidParameter(
                "regulator values must be positive".into(),
            ));
        }
        if eps_values.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::InvalidParameter(
                "regulator values must be strictly decreasing".into(),
            ));
        }
        if order + 1 > eps_values.len() {
            return Err(Error::InvalidParameter(format!(
                "order {order} needs {} regulator values",
                order + 1
            )));
        }
        Ok(EpsSchedule { eps_values, order })
    }

    /// `eps / T` in {1e-2, 5e-3, 2.5e-3, 1.25e-3}, cubic extrapolation.
    pub fn default_for(width: R) -> Self {
        let base = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
        EpsSchedule {
            eps_values: base.iter().map(|&e| R::lit(e) * width).collect(),
            order: 3,
        }
    }

    pub fn eps_values(&self) -> &[R] {
        &self.eps_values
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Same schedule with every regulator value multiplied by `factor`.
    pub fn scaled(&self, factor: R) -> Self {
        EpsSchedule {
            eps_values: self.eps_values.iter().map(|&e| e * factor).collect(),
            order: self.order,
        }
    }
}

/// An extrapolated limit with the difference between the two highest
/// extrapolation orders as its consistency residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated<R> {
    pub value: Complex<R>,
    pub residual: R,
}

/// Value at zero of the interpolating polynomial through `(xs, ys)`.
pub fn neville_at_zero<R: Real>(xs: &[R], ys: &[Complex<R>]) -> Complex<R> {
    assert_eq!(xs.len(), ys.len());
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            // P(0) from the two overlapping lower-order tableaux
            p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
        }
    }
    p[0]
}

/// Evaluates `f` at every regulator value and extrapolates to zero.
///
/// Fails with [`Error::Divergent`] when `|f|` grows like `1/eps` or faster
/// between the two smallest regulators, and with [`Error::Extrapolation`]
/// when the two highest-order extrapolants differ by more than ten times
/// the tolerance.
pub fn eps_extrapolate<R, F>(mut f: F, schedule: &EpsSchedule<R>, tol: &Tolerance<R>) -> Result<Extrapolated<R>>
where
    R: Real,
    F: FnMut(R) -> Result<Complex<R>>,
{
    let xs = schedule.eps_values();
    let mut ys = Vec::with_capacity(xs.len());
    for &e in xs {
        let y = f(e)?;
        if !(y.re.is_finite() && y.im.is_finite()) {
            return Err(Error::Divergent(format!(
                "regulated value not finite at eps = {:e}",
                e.to_f64().unwrap_or(f64::NAN)
            )));
        }
        ys.push(y);
    }
    let n = xs.len();
    if n >= 2 {
        let (a, b) = (ys[n - 2].norm(), ys[n - 1].norm());
        if a > R::zero() && b > a {
            let slope = (b / a).ln() / (xs[n - 2] / xs[n - 1]).ln();
            if slope >= R::lit(0.9) {
                return Err(Error::Divergent(format!(
                    "regulated value grows like eps^-{:.2}",
                    slope.to_f64().unwrap_or(f64::NAN)
                )));
            }
        }
    }

    let k = schedule.order() + 1;
    let value = neville_at_zero(&xs[n - k..], &ys[n - k..]);
    let residual = if k >= 2 {
        let lower = neville_at_zero(&xs[n - k + 1..], &ys[n - k + 1..]);
        (value - lower).norm()
    } else {
        R::zero()
    };
    let limit = R::lit(10.0) * tol.bound(value);
    if residual > limit {
        return Err(Error::Extrapolation {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            limit: limit.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Extrapolated { value, residual })
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
///
/// Returns the most advanced even-column estimate and the difference to
/// its predecessor in the same column as an error indicator.
pub fn wynn_epsilon<R: Real>(sums: &[Complex<R>]) -> (Complex<R>, R) {
    let n = sums.len();
    if n == 0 {
        return (Complex::new(R::zero(), R::zero()), R::infinity());
    }
    if n < 3 {
        let err = if n == 2 { (sums[1] - sums[0]).norm() } else { R::infinity() };
        return (sums[n - 1], err);
    }
    // columns[k][i] = eps_k^{(i)}
    let zero = Complex::new(R::zero(), R::zero());
    let mut prev: Vec<Complex<R>> = vec![zero; n + 1];
    let mut cur: Vec<Complex<R>> = sums.to_vec();
    let mut best = sums[n - 1];
    let mut best_err = (sums[n - 1] - sums[n - 2]).norm();
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d.norm() == R::zero() {
                // converged exactly; the sequence cannot be pushed further
                return (cur[i + 1], R::zero());
            }
            next.push(prev[i + 1] + d.inv());
        }
        k += 1;
        if k % 2 == 0 && next.len() >= 2 {
            let m = next.len();
            let err = (next[m - 1] - next[m - 2]).norm();
            if err <= best_err {
                best = next[m - 1];
                best_err = err;
            }
        }
        prev = cur;
        cur = next;
    }
    (best, best_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn schedule_validation() {
        assert!(EpsSchedule::new(vec![1e-2, 1e-3], 1).is_ok());
        assert!(EpsSchedule::new(vec![1e-3, 1e-2], 1).is_err());
        assert!(EpsSchedule::new(vec![1e-2, 0.0], 1).is_err());
        assert!(EpsSchedule::new(vec![1e-2, 1e-3], 2).is_err());
        let d = EpsSchedule::default_for(2.0);
        assert_eq!(d.eps_values(), &[2e-2, 1e-2, 5e-3, 2.5e-3]);
        assert_eq!(d.order(), 3);
    }

    #[test]
    fn linear_is_exact() {
        let s = EpsSchedule::default_for(1.0);
        let r = eps_extrapolate(|e| Ok(c(3.0 + 2.0 * e)), &s, &Tolerance::new(1e-10)).unwrap();
        assert!((r.value.re - 3.0).abs() < 1e-13);
    }

    #[test]
    fn cubic_is_exact() {
        let s = EpsSchedule::default_for(1.0);
        let p = |e: f64| Complex::new(1.0 - 4.0 * e + 7.0 * e * e - 100.0 * e * e * e, 2.0 * e);
        let r = eps_extrapolate(|e| Ok(p(e)), &s, &Tolerance::new(1e-4)).unwrap();
        assert!((r.value - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn inverse_eps_is_divergent() {
        let s = EpsSchedule::default_for(1.0);
        let r = eps_extrapolate(|e| Ok(c(1.0 / e)), &s, &Tolerance::new(1e-8));
        assert!(matches!(r, Err(Error::Divergent(_))));
    }

    #[test]
    fn inconsistent_sequence_is_flagged() {
        let s = EpsSchedule::default_for(1.0);
        let r = eps_extrapolate(|e: f64| Ok(c((e * 1e4).sin())), &s, &Tolerance::new(1e-8));
        assert!(matches!(r, Err(Error::Extrapolation { .. })));
    }

    /// int g(x) / (x - 1 - i eps)^2 dx with g = exp(-x^2) tends to
    /// PV int g'(x)/(x - 1) dx + i pi g'(1).
    #[test]
    fn double_pole_against_sokhotski_plemelj() {
        let g = |x: f64| (-x * x).exp();
        let dg = |x: f64| -2.0 * x * (-x * x).exp();
        let tol = Tolerance::new(1e-12).with_abs(1e-11);
        let s = EpsSchedule::default_for(1.0);
        let r = eps_extrapolate(
            |e| {
                let f = |x: f64| c(g(x)) / (Complex::new(x - 1.0, -e)).powi(2);
                Ok(integrate(f, &[-9.0, 0.0, 1.0, 2.0, 9.0], &tol)?.value)
            },
            &s,
            &Tolerance::new(1e-6),
        )
        .unwrap();
        // symmetric-interval principal value
        let pv = integrate(
            |y: f64| c(if y == 0.0 { 0.0 } else { (dg(1.0 + y) - dg(1.0 - y)) / y }),
            &[0.0, 1.0, 10.0],
            &tol,
        )
        .unwrap()
        .value
        .re;
        let expect = Complex::new(pv, std::f64::consts::PI * dg(1.0));
        assert!((r.value - expect).norm() < 1e-6, "{:?} vs {expect}", r.value);
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut sums = Vec::new();
        let mut s = 0.0;
        for n in 1..=20 {
            s += if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64;
            sums.push(c(s));
        }
        let (v, err) = wynn_epsilon(&sums);
        assert!((v.re - 2f64.ln()).abs() < 1e-12, "{v}");
        assert!(err < 1e-10);
    }

    #[test]
    fn neville_reproduces_polynomial() {
        let xs = [0.4, 0.3, 0.2, 0.1];
        let ys: Vec<_> = xs.iter().map(|&x| c(2.0 + x - x * x * x)).collect();
        assert!((neville_at_zero(&xs, &ys) - c(2.0)).norm() < 1e-14);
    }
}
