//! Nested double integrals over the plane and the time-ordered half-plane.

use std::cell::{Cell, RefCell};

use num_complex::Complex;

use super::path::Contour;
use super::{QuadResult, Tolerance};
use crate::error::{Error, Result};
use crate::Real;

/// Half-width of the truncation box in units of the Gaussian width.
pub const BOX_HALF_WIDTH: f64 = 6.0;

/// Nested adaptive integration: an outer contour in `t1` and, for each
/// point on it, an inner contour in `t2`.
///
/// Inner estimates are computed to a hundredth of the outer tolerance and
/// their error estimates are integrated into the outer one.
#[derive(Debug, Clone, Copy)]
pub struct Nested2d<R> {
    pub tol: Tolerance<R>,
}

impl<R: Real> Nested2d<R> {
    pub fn new(tol: Tolerance<R>) -> Self {
        Nested2d { tol }
    }

    pub fn integrate<C, G>(&self, outer: &Contour<R>, inner: C, mut g: G) -> Result<QuadResult<R>>
    where
        C: Fn(Complex<R>) -> Contour<R>,
        G: FnMut(Complex<R>, Complex<R>) -> Complex<R>,
    {
        let length = outer.length().max(R::min_positive_value());
        let inner_tol = Tolerance {
            rel: self.tol.rel * R::lit(0.01),
            abs: self.tol.abs * R::lit(0.1) / length,
            max_evals: self.tol.max_evals,
        };
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let inner_evals = Cell::new(0usize);
        let g = RefCell::new(&mut g);

        let outer_result = outer.integrate_with_errors(
            |t1| {
                if failure.borrow().is_some() {
                    return (Complex::new(R::zero(), R::zero()), R::zero());
                }
                let path = inner(t1);
                let mut g = g.borrow_mut();
                match path.integrate(|t2| (*g)(t1, t2), &inner_tol) {
                    Ok(r) => {
                        inner_evals.set(inner_evals.get() + r.evaluations);
                        (r.value, r.abs_error)
                    }
                    Err(e) => {
                        *failure.borrow_mut() = Some(e);
                        (Complex::new(R::zero(), R::zero()), R::zero())
                    }
                }
            },
            &self.tol,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let mut r = outer_result?;
        r.evaluations += inner_evals.get();
        Ok(r)
    }
}

fn check_finite<R: Real, G>(mut g: G) -> impl FnMut(Complex<R>, Complex<R>) -> Complex<R>
where
    G: FnMut(R, R) -> Complex<R>,
{
    move |t1, t2| g(t1.re, t2.re)
}

/// `int dt1 int_{t2 <= t1} dt2 g(t1, t2)` over the box `centers +- 6 width`.
///
/// Returns a singular-kernel error if `g` produces a non-finite value.
pub fn integrate_time_ordered_2d<R, G>(g: G, centers: (R, R), width: R, tol: R) -> Result<QuadResult<R>>
where
    R: Real,
    G: FnMut(R, R) -> Complex<R>,
{
    box_integral(g, centers, width, tol, true)
}

/// `int dt1 int dt2 g(t1, t2)` over the box `centers +- 6 width`.
pub fn integrate_plane_2d<R, G>(g: G, centers: (R, R), width: R, tol: R) -> Result<QuadResult<R>>
where
    R: Real,
    G: FnMut(R, R) -> Complex<R>,
{
    box_integral(g, centers, width, tol, false)
}

fn box_integral<R, G>(g: G, centers: (R, R), width: R, tol: R, ordered: bool) -> Result<QuadResult<R>>
where
    R: Real,
    G: FnMut(R, R) -> Complex<R>,
{
    if !(width > R::zero()) {
        return Err(Error::InvalidParameter("width must be positive".into()));
    }
    let half = width * R::lit(BOX_HALF_WIDTH);
    let (a1, b1) = (centers.0 - half, centers.0 + half);
    let (a2, b2) = (centers.1 - half, centers.1 + half);
    // the inner range has kinks where t1 crosses the inner box edges
    let outer = Contour::real(a1, b1, &[a2, b2]);

    let bad: Cell<Option<(f64, f64)>> = Cell::new(None);
    let mut g = check_finite(g);
    let guarded = |t1: Complex<R>, t2: Complex<R>| {
        let v = g(t1, t2);
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            if bad.get().is_none() {
                bad.set(Some((
                    t1.re.to_f64().unwrap_or(f64::NAN),
                    t2.re.to_f64().unwrap_or(f64::NAN),
                )));
            }
            Complex::new(R::zero(), R::zero())
        }
    };
    let r = Nested2d::new(Tolerance::new(tol)).integrate(
        &outer,
        |t1| {
            let hi = if ordered { b2.min(t1.re) } else { b2 };
            if hi > a2 {
                Contour::real(a2, hi, &[])
            } else {
                Contour::real(a2, a2, &[])
            }
        },
        guarded,
    )?;
    if let Some((t1, t2)) = bad.get() {
        return Err(Error::SingularKernel { t1, t2 });
    }
    Ok(r)
}
