//! Integrals over `[0, inf)` of Gaussian-damped or slowly decaying
//! oscillatory integrands.

use num_complex::Complex;

use super::adaptive::integrate;
use super::extrapolate::wynn_epsilon;
use super::{QuadResult, Tolerance};
use crate::error::{Error, Result};
use crate::Real;

const MAX_SPLITS: usize = 4000;
const MAX_TAIL_TERMS: usize = 400;

/// Configuration for a semi-infinite integral.
///
/// Beyond `center` the integrand must decay at least like
/// `exp(-(k - center)^2 / (2 decay_scale^2))`, unless `algebraic` is set,
/// in which case it may decay as slowly as `sin(k pi / half_period) / k`
/// and the tail is summed half-period by half-period with Wynn's epsilon
/// acceleration.
#[derive(Debug, Clone, Copy)]
pub struct SemiInfinite<R> {
    pub decay_scale: R,
    pub center: R,
    pub half_period: Option<R>,
    pub algebraic: bool,
    pub tol: Tolerance<R>,
}

impl<R: Real> SemiInfinite<R> {
    pub fn new(decay_scale: R, tol: Tolerance<R>) -> Self {
        SemiInfinite {
            decay_scale,
            center: R::zero(),
            half_period: None,
            algebraic: false,
            tol,
        }
    }

    /// Centre of the Gaussian envelope, if it is not at the origin.
    pub fn centered(self, center: R) -> Self {
        SemiInfinite { center, ..self }
    }

    /// Adds panel splits every `half_period` (e.g. `pi / L` for `sin(k L)`).
    pub fn oscillating(self, half_period: R) -> Self {
        SemiInfinite {
            half_period: Some(half_period),
            ..self
        }
    }

    /// Declares a slowly decaying oscillatory tail; requires a half period.
    pub fn algebraic_tail(self) -> Self {
        SemiInfinite {
            algebraic: true,
            ..self
        }
    }

    /// Truncation point at which the Gaussian tail drops below the
    /// tolerance, with three decades of margin.
    pub fn cutoff(&self) -> R {
        let depth = (R::lit(2.0) * (R::lit(1e3) / self.tol.rel).ln()).sqrt();
        self.center.max(R::zero()) + self.decay_scale * depth.max(R::lit(6.0))
    }

    pub fn integrate<F>(&self, mut f: F) -> Result<QuadResult<R>>
    where
        F: FnMut(R) -> Complex<R>,
    {
        if !(self.decay_scale > R::zero()) || !(self.tol.rel > R::zero()) {
            return Err(Error::InvalidParameter(
                "decay scale and tolerance must be positive".into(),
            ));
        }
        let k_max = self.cutoff();
        let mut breaks = vec![R::zero()];
        if self.center > R::zero() && self.center < k_max {
            breaks.push(self.center);
        }
        let mut k_head = k_max;
        if let Some(hp) = self.half_period {
            if !(hp > R::zero()) {
                return Err(Error::InvalidParameter("half period must be positive".into()));
            }
            // every n-th zero so that at most MAX_SPLITS panels are seeded
            let count = (k_max / hp).ceil().to_usize().unwrap_or(usize::MAX);
            let stride = count / MAX_SPLITS + 1;
            let mut n = stride;
            while R::from_usize(n).unwrap() * hp < k_max {
                breaks.push(R::from_usize(n).unwrap() * hp);
                n += stride;
            }
            if self.algebraic {
                k_head = R::from_usize(count).unwrap() * hp;
            }
        } else if self.algebraic {
            return Err(Error::InvalidParameter(
                "an algebraic tail needs the oscillation half period".into(),
            ));
        }
        breaks.push(k_head);

        let head = integrate(&mut f, &breaks, &self.tol)?;
        if !self.algebraic {
            return Ok(head);
        }
        let hp = self.half_period.unwrap();
        let tail = oscillatory_tail(&mut f, k_head, hp, head.value, &self.tol)?;
        Ok(QuadResult {
            value: tail.value,
            abs_error: head.abs_error + tail.abs_error,
            evaluations: head.evaluations + tail.evaluations,
        })
    }
}

/// Sums `head + int_start^inf f` one half period at a time and accelerates
/// the partial sums with Wynn's epsilon algorithm.
fn oscillatory_tail<R, F>(
    f: &mut F,
    start: R,
    half_period: R,
    head: Complex<R>,
    tol: &Tolerance<R>,
) -> Result<QuadResult<R>>
where
    R: Real,
    F: FnMut(R) -> Complex<R>,
{
    let term_tol = Tolerance {
        rel: tol.rel * R::lit(0.1),
        abs: tol.abs * R::lit(0.01),
        max_evals: tol.max_evals,
    };
    let mut sums = vec![head];
    let mut running = head;
    let mut evaluations = 0;
    let mut quad_err = R::zero();
    let mut last = (head, R::infinity());
    let mut hits = 0;
    for n in 0..MAX_TAIL_TERMS {
        let a = start + R::from_usize(n).unwrap() * half_period;
        let piece = integrate(&mut *f, &[a, a + half_period], &term_tol)?;
        evaluations += piece.evaluations;
        quad_err = quad_err + piece.abs_error;
        running = running + piece.value;
        sums.push(running);
        if sums.len() < 6 {
            continue;
        }
        let (v, e) = wynn_epsilon(&sums);
        let shift = (v - last.0).norm();
        let err = e.max(shift);
        last = (v, err);
        if err <= tol.bound(v) * R::lit(0.1) {
            hits += 1;
            if hits >= 2 {
                return Ok(QuadResult {
                    value: v,
                    abs_error: err + quad_err,
                    evaluations,
                });
            }
        } else {
            hits = 0;
        }
    }
    Err(Error::NonConvergence {
        evaluations,
        abs_error: last.1.to_f64().unwrap_or(f64::NAN),
        value_re: last.0.re.to_f64().unwrap_or(f64::NAN),
        value_im: last.0.im.to_f64().unwrap_or(f64::NAN),
    })
}

/// `int_0^inf f(k) dk` for an integrand with Gaussian decay on the scale
/// `decay_scale`, to relative tolerance `tol`.
pub fn integrate_semi_infinite<R, F>(f: F, decay_scale: R, tol: R) -> Result<QuadResult<R>>
where
    R: Real,
    F: FnMut(R) -> Complex<R>,
{
    SemiInfinite::new(decay_scale, Tolerance::new(tol)).integrate(f)
}
