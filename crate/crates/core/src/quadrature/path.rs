//! Polyline integration contours in the complex plane.
//!
//! Contours are used to move oscillatory integrals off the real axis into
//! the half-plane free of kernel singularities. A contour can be pinned to
//! the real axis at points where the integrand is only piecewise analytic.

use num_complex::Complex;

use super::adaptive::integrate_with_errors;
use super::{QuadResult, Tolerance};
use crate::error::Result;
use crate::Real;

#[derive(Debug, Clone)]
struct Segment<R> {
    from: Complex<R>,
    to: Complex<R>,
    // split parameters in (0, 1)
    splits: Vec<R>,
}

#[derive(Debug, Clone)]
pub struct Contour<R> {
    segments: Vec<Segment<R>>,
}

impl<R: Real> Contour<R> {
    /// The real interval `[a, b]` with interior break points.
    pub fn real(a: R, b: R, breaks: &[R]) -> Self {
        let zero = R::zero();
        Self::lifted(Complex::new(a, zero), Complex::new(b, zero), &[], zero, breaks)
    }

    /// A path from `start` to `end` that runs at constant imaginary part
    /// `height`, returning to the real axis at each pin.
    ///
    /// `breaks` are real abscissae (projected pole positions, kinks) at which
    /// the horizontal pieces are split before adaptive refinement.
    pub fn lifted(start: Complex<R>, end: Complex<R>, pins: &[R], height: R, breaks: &[R]) -> Self {
        let (lo, hi) = (start.re, end.re);
        let forward = hi >= lo;
        let inside = |x: R| if forward { x > lo && x < hi } else { x < lo && x > hi };
        let mut knots: Vec<R> = pins.iter().copied().filter(|&p| inside(p)).collect();
        knots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        if !forward {
            knots.reverse();
        }

        let lift = Complex::new(R::zero(), height);
        let mut vertices = vec![start];
        let push = |z: Complex<R>, vs: &mut Vec<Complex<R>>| {
            if vs.last().map_or(true, |&l| l != z) {
                vs.push(z);
            }
        };
        push(Complex::new(lo, R::zero()) + lift, &mut vertices);
        for &k in &knots {
            push(Complex::new(k, R::zero()) + lift, &mut vertices);
            push(Complex::new(k, R::zero()), &mut vertices);
            push(Complex::new(k, R::zero()) + lift, &mut vertices);
        }
        push(Complex::new(hi, R::zero()) + lift, &mut vertices);
        push(end, &mut vertices);

        let segments = vertices
            .windows(2)
            .map(|w| {
                let (from, to) = (w[0], w[1]);
                let mut splits = Vec::new();
                let dx = to.re - from.re;
                if dx != R::zero() {
                    for &b in breaks {
                        let s = (b - from.re) / dx;
                        if s > R::zero() && s < R::one() {
                            splits.push(s);
                        }
                    }
                }
                Segment { from, to, splits }
            })
            .collect();
        Contour { segments }
    }

    pub fn is_real(&self) -> bool {
        self.segments
            .iter()
            .all(|s| s.from.im == R::zero() && s.to.im == R::zero())
    }

    /// Total arc length.
    pub fn length(&self) -> R {
        self.segments
            .iter()
            .fold(R::zero(), |acc, s| acc + (s.to - s.from).norm())
    }

    /// Integrates `f(z) dz` along the contour.
    pub fn integrate<F>(&self, mut f: F, tol: &Tolerance<R>) -> Result<QuadResult<R>>
    where
        F: FnMut(Complex<R>) -> Complex<R>,
    {
        self.integrate_with_errors(|z| (f(z), R::zero()), tol)
    }

    /// As [`Contour::integrate`] for integrands carrying their own error.
    pub fn integrate_with_errors<F>(&self, mut f: F, tol: &Tolerance<R>) -> Result<QuadResult<R>>
    where
        F: FnMut(Complex<R>) -> (Complex<R>, R),
    {
        if self.segments.is_empty() {
            return Ok(QuadResult::zero());
        }
        // Segment k occupies the parameter range [k, k + 1].
        let mut breaks = Vec::new();
        for (k, s) in self.segments.iter().enumerate() {
            let base = R::from_usize(k).unwrap();
            breaks.push(base);
            breaks.extend(s.splits.iter().map(|&p| base + p));
        }
        breaks.push(R::from_usize(self.segments.len()).unwrap());

        let n = self.segments.len();
        let segs = &self.segments;
        integrate_with_errors(
            |x| {
                let k = x.floor().to_usize().unwrap_or(0).min(n - 1);
                let s = &segs[k];
                let local = x - R::from_usize(k).unwrap();
                let d = s.to - s.from;
                let z = s.from + d * local;
                let (v, e) = f(z);
                (v * d, e * d.norm())
            },
            &breaks,
            tol,
        )
    }
}
