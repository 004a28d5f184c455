//! Globally adaptive bisection driver over finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;

use super::gauss_kronrod::{gk21, POINTS};
use super::{QuadResult, Tolerance};
use crate::error::{Error, Result};
use crate::Real;

struct Panel<R> {
    a: R,
    b: R,
    value: Complex<R>,
    error: R,
}

struct Key<R> {
    error: R,
    index: usize,
}

impl<R: Real> PartialEq for Key<R> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<R: Real> Eq for Key<R> {}
impl<R: Real> PartialOrd for Key<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<R: Real> Ord for Key<R> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            // ties resolved towards the leftmost panel for determinism
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from one panel
/// per consecutive pair of break points.
pub fn integrate<R, F>(mut f: F, breaks: &[R], tol: &Tolerance<R>) -> Result<QuadResult<R>>
where
    R: Real,
    F: FnMut(R) -> Complex<R>,
{
    integrate_with_errors(|x| (f(x), R::zero()), breaks, tol)
}

/// As [`integrate`], for integrands that carry their own absolute error
/// (typically an inner quadrature).
pub fn integrate_with_errors<R, F>(mut f: F, breaks: &[R], tol: &Tolerance<R>) -> Result<QuadResult<R>>
where
    R: Real,
    F: FnMut(R) -> (Complex<R>, R),
{
    let mut pts: Vec<R> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    pts.dedup_by(|x, y| x == y);
    if pts.len() < 2 {
        return Ok(QuadResult::zero());
    }

    let mut panels: Vec<Panel<R>> = Vec::with_capacity(64);
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for w in pts.windows(2) {
        let est = gk21(&mut f, w[0], w[1]);
        evaluations += POINTS;
        if !est.roundoff_limited {
            heap.push(Key {
                error: est.error,
                index: panels.len(),
            });
        }
        panels.push(Panel {
            a: w[0],
            b: w[1],
            value: est.value,
            error: est.error,
        });
    }

    let (mut total, mut total_err) = totals(&panels);
    let mut iterations = 0usize;
    while !tol.met(total, total_err) {
        let Some(Key { index, .. }) = heap.pop() else {
            // every remaining panel is at the resolution limit
            break;
        };
        if evaluations + 2 * POINTS > tol.max_evals {
            let (v, e) = totals(&panels);
            return Err(Error::NonConvergence {
                evaluations,
                abs_error: e.to_f64().unwrap_or(f64::NAN),
                value_re: v.re.to_f64().unwrap_or(f64::NAN),
                value_im: v.im.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (a, b) = (panels[index].a, panels[index].b);
        let mid = (a + b) * R::lit(0.5);
        let left = gk21(&mut f, a, mid);
        let right = gk21(&mut f, mid, b);
        evaluations += 2 * POINTS;

        total = total + left.value + right.value - panels[index].value;
        total_err = total_err + left.error + right.error - panels[index].error;

        panels[index] = Panel {
            a,
            b: mid,
            value: left.value,
            error: left.error,
        };
        let right_index = panels.len();
        panels.push(Panel {
            a: mid,
            b,
            value: right.value,
            error: right.error,
        });
        for (i, est) in [(index, left), (right_index, right)] {
            let p = &panels[i];
            let scale = p.a.abs().max(p.b.abs()).max(R::min_positive_value());
            if !est.roundoff_limited && (p.b - p.a).abs() > R::lit(1e3) * R::epsilon() * scale {
                heap.push(Key { error: p.error, index: i });
            }
        }

        iterations += 1;
        if iterations % 64 == 0 {
            (total, total_err) = totals(&panels);
        }
    }

    panels.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let (value, abs_error) = totals(&panels);
    Ok(QuadResult {
        value,
        abs_error,
        evaluations,
    })
}

fn totals<R: Real>(panels: &[Panel<R>]) -> (Complex<R>, R) {
    panels.iter().fold(
        (Complex::new(R::zero(), R::zero()), R::zero()),
        |(v, e), p| (v + p.value, e + p.error),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re<F: Fn(f64) -> f64>(f: F) -> impl FnMut(f64) -> Complex<f64> {
        move |x| Complex::new(f(x), 0.0)
    }

    #[test]
    fn integrates_endpoint_singularity() {
        let tol = Tolerance::new(1e-10);
        let r = integrate(re(|x: f64| 1.0 / x.sqrt()), &[0.0, 1.0], &tol).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-9, "{r:?}");
        assert!((r.value.re - 2.0).abs() <= 10.0 * r.abs_error.max(1e-15));
    }

    #[test]
    fn narrow_peak_with_breakpoint() {
        // Lorentzian of width 1e-4 integrates to pi
        let w = 1e-4;
        let tol = Tolerance::new(1e-10).with_abs(1e-12);
        let r = integrate(re(move |x: f64| w / (x * x + w * w)), &[-1.0, 0.0, 1.0], &tol).unwrap();
        let exact = 2.0 * (1.0f64 / w).atan();
        assert!((r.value.re - exact).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let tol = Tolerance::new(1e-14).with_abs(0.0).with_max_evals(200);
        let r = integrate(re(|x: f64| (1.0 / x).sin()), &[1e-6, 1.0], &tol);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn deterministic() {
        let tol = Tolerance::new(1e-12);
        let f = |x: f64| Complex::new((10.0 * x).sin() * (-x * x).exp(), x.cos());
        let a = integrate(f, &[-3.0, 0.5, 3.0], &tol).unwrap();
        let b = integrate(f, &[-3.0, 0.5, 3.0], &tol).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_range() {
        let tol = Tolerance::new(1e-8);
        let r = integrate(re(|x: f64| x), &[1.0], &tol).unwrap();
        assert_eq!(r.value, Complex::new(0.0, 0.0));
    }
}
