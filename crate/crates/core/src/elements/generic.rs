//! Generic `I_jk` and `J_jk` double integrals against any [`Backend`].
//!
//! The `(t1, t2)` box `centre +- 6 T` is cut at the times where the kernel
//! changes analytic form. On every rectangle of the plane `t1` runs along a
//! contour lowered into the lower half-plane and `t2` along one raised into
//! the upper half-plane, returning to the real axis at the rectangle edges.
//! Both shifts move the integration away from the `i eps` poles and, when
//! the phase `e^{i (p Omega t1 + q Omega t2)}` allows, by the height that
//! flattens the Gaussian-times-phase envelope.
//!
//! For `J` the inner integral stops at `t2 = t1`. Only `t2` is moved off
//! the axis there: a pole meeting the moving endpoint makes the inner
//! integral a function of `t1` with a logarithmic branch point on the real
//! axis, which the outer quadrature integrates in place.

use std::cell::RefCell;

use num_complex::Complex64;

use super::{Estimate, YTerm};
use crate::detector::DetectorParams;
use crate::error::{Error, Result};
use crate::quadrature::{eps_extrapolate, Contour, Tolerance};
use crate::{EpsSchedule, QuadResult};
use crate::quadrature::time_ordered::BOX_HALF_WIDTH;
use crate::wightman::{separation, Backend, Shockwave, NORM};

/// Contours are never lifted further than this many switching widths.
const MAX_LIFT: f64 = 8.0;
/// Lift used when the phase gives nothing to gain from the shift.
const MIN_LIFT: f64 = 0.25;

/// Settings for the generic double integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericConfig {
    /// Relative accuracy of the final (extrapolated) value.
    pub tol: f64,
    /// Regulator schedule for kernels carrying `i eps`. With `None` the
    /// deformed-contour integral is evaluated directly at `eps = 0`, which
    /// is already the limit since the contours keep clear of every pole.
    pub schedule: Option<EpsSchedule>,
    /// Relative consistency required of the extrapolation; defaults to
    /// `tol`. Low-order fits at finite regulators need a looser value.
    pub eps_tol: Option<f64>,
    pub max_evals: usize,
}

impl GenericConfig {
    pub fn new(tol: f64) -> Self {
        GenericConfig {
            tol,
            schedule: None,
            eps_tol: None,
            max_evals: 20_000_000,
        }
    }

    /// Schedule in units of the switching width of the first detector.
    pub fn with_schedule(self, schedule: Option<EpsSchedule>) -> Self {
        GenericConfig { schedule, ..self }
    }

    pub fn with_eps_tol(self, eps_tol: f64) -> Self {
        GenericConfig { eps_tol: Some(eps_tol), ..self }
    }

    pub fn with_max_evals(self, max_evals: usize) -> Self {
        GenericConfig { max_evals, ..self }
    }
}

impl Default for GenericConfig {
    fn default() -> Self {
        GenericConfig::new(1e-7)
    }
}

/// Which of the two double integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Domain {
    Plane,
    TimeOrdered,
}

fn sign(s: i8) -> Result<f64> {
    match s {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::InvalidParameter(format!("sign {s} is not +-1"))),
    }
}

fn lift(freq: f64, width: f64, favourable: bool) -> f64 {
    let h = if favourable { 0.5 * freq.abs() * width * width } else { 0.0 };
    h.max(MIN_LIFT * width).min(MAX_LIFT * width)
}

fn sorted_inside(mut pts: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    pts.retain(|&p| p > lo && p < hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

#[derive(Clone, Copy)]
enum Piece {
    Full(f64, f64),
    // t2 from the lower edge up to t1
    UpToT1(f64),
}

struct Problem<'a> {
    j: &'a DetectorParams,
    k: &'a DetectorParams,
    p: f64,
    q: f64,
    domain: Domain,
    backend: &'a dyn Backend,
}

impl Problem<'_> {
    /// Magnitude of the lifted envelope, used for the absolute floor.
    fn scale(&self) -> f64 {
        let (wj, wk) = (self.p * self.j.gap, self.q * self.k.gap);
        let mut penalty = 0.0;
        if wj < 0.0 {
            penalty += (wj * self.j.width).powi(2) / 4.0;
        }
        if wk > 0.0 {
            penalty += (wk * self.k.width).powi(2) / 4.0;
        }
        self.j.coupling * self.k.coupling * self.j.width * self.k.width * NORM * (-penalty).exp()
    }

    /// One evaluation of the double integral at fixed regulator.
    fn integrate<K, A>(&self, kernel: &K, eps: f64, active: &A, tol: f64, max_evals: usize) -> Result<QuadResult>
    where
        K: Fn(Complex64, Complex64, f64, (f64, f64)) -> Complex64,
        A: Fn((f64, f64)) -> bool,
    {
        let (j, k) = (self.j, self.k);
        let (wj, wk) = (self.p * j.gap, self.q * k.gap);
        let deform = self.backend.deformable();
        // t1 is lowered, t2 raised. Under time ordering a t2 pole can meet
        // the moving endpoint t2 = t1, which puts a branch point of the
        // inner integral on the real t1 axis; t1 then stays real.
        let lower = deform && self.domain == Domain::Plane;
        let h1 = if lower { lift(wj, j.width, wj < 0.0) } else { 0.0 };
        let h2 = if deform { lift(wk, k.width, wk > 0.0) } else { 0.0 };

        let (a1, b1) = (j.center - BOX_HALF_WIDTH * j.width, j.center + BOX_HALF_WIDTH * j.width);
        let (a2, b2) = (k.center - BOX_HALF_WIDTH * k.width, k.center + BOX_HALF_WIDTH * k.width);
        let mut outer_pins = self.backend.pins(j);
        if self.domain == Domain::TimeOrdered {
            outer_pins.extend(self.backend.pins(k));
            outer_pins.extend([a2, b2]);
        }
        let mut t1_knots = vec![a1];
        t1_knots.extend(sorted_inside(outer_pins, a1, b1));
        t1_knots.push(b1);
        let mut t2_knots = vec![a2];
        t2_knots.extend(sorted_inside(self.backend.pins(k), a2, b2));
        t2_knots.push(b2);

        let tol_q = Tolerance::new(tol)
            .with_abs(tol * 1e-3 * self.scale())
            .with_max_evals(max_evals);

        let (cj, ck) = (j.center, k.center);
        let (tj2, tk2) = (j.width * j.width, k.width * k.width);
        let integrand = move |t1: Complex64, t2: Complex64, anchor| {
            let d1 = t1 - cj;
            let d2 = t2 - ck;
            let log_env = -d1 * d1 / tj2 - d2 * d2 / tk2 + Complex64::i() * (wj * t1 + wk * t2);
            log_env.exp() * kernel(t1, t2, eps, anchor)
        };

        let mut total = QuadResult::zero();
        for w1 in t1_knots.windows(2) {
            let (lo1, hi1) = (w1[0], w1[1]);
            let mid1 = 0.5 * (lo1 + hi1);
            let mut pieces = Vec::new();
            for w2 in t2_knots.windows(2) {
                let (lo2, hi2) = (w2[0], w2[1]);
                let anchor = (mid1, 0.5 * (lo2 + hi2));
                let piece = match self.domain {
                    Domain::Plane => Piece::Full(lo2, hi2),
                    Domain::TimeOrdered if hi1 <= lo2 => continue,
                    Domain::TimeOrdered if hi2 <= lo1 => Piece::Full(lo2, hi2),
                    Domain::TimeOrdered => Piece::UpToT1(lo2),
                };
                if let Piece::UpToT1(_) = piece {
                    // a point strictly inside the triangle below the diagonal
                    let anchor = (mid1, 0.5 * (lo2 + mid1));
                    if active(anchor) {
                        pieces.push((piece, anchor));
                    }
                } else if active(anchor) {
                    pieces.push((piece, anchor));
                }
            }
            if pieces.is_empty() {
                continue;
            }

            let outer = if lower {
                Contour::lifted(c(lo1), c(hi1), &[], -h1, &[])
            } else {
                Contour::real(lo1, hi1, &[])
            };
            let length = outer.length().max(f64::MIN_POSITIVE);
            let inner_tol = Tolerance {
                rel: tol_q.rel * 0.01,
                abs: tol_q.abs * 0.1 / length,
                max_evals,
            };
            let failure: RefCell<Option<Error>> = RefCell::new(None);
            let evals = RefCell::new(0usize);
            let r = outer.integrate_with_errors(
                |t1| {
                    if failure.borrow().is_some() {
                        return (Complex64::new(0.0, 0.0), 0.0);
                    }
                    let breaks = self.backend.singular_times(j, t1, k);
                    let mut sum = Complex64::new(0.0, 0.0);
                    let mut err = 0.0;
                    for &(piece, anchor) in &pieces {
                        let path = match piece {
                            Piece::Full(lo2, hi2) => Contour::lifted(c(lo2), c(hi2), &[], h2, &breaks),
                            Piece::UpToT1(lo2) => Contour::lifted(c(lo2), t1, &[], h2, &breaks),
                        };
                        match path.integrate(|t2| integrand(t1, t2, anchor), &inner_tol) {
                            Ok(r) => {
                                sum += r.value;
                                err += r.abs_error;
                                *evals.borrow_mut() += r.evaluations;
                            }
                            Err(e) => {
                                *failure.borrow_mut() = Some(e);
                                break;
                            }
                        }
                    }
                    (sum, err)
                },
                &tol_q,
            );
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            let mut r = r?;
            if !(r.value.re.is_finite() && r.value.im.is_finite()) {
                return Err(Error::SingularKernel { t1: mid1, t2: f64::NAN });
            }
            r.evaluations += evals.into_inner();
            total = total.combine(r);
        }
        let c = self.j.coupling * self.k.coupling * if self.domain == Domain::TimeOrdered { -1.0 } else { 1.0 };
        Ok(total.scale(Complex64::new(c, 0.0)))
    }

    /// Evaluates the kernel family `kernel(eps)` and removes the regulator.
    fn solve<K, A>(&self, kernel: K, active: A, cfg: &GenericConfig) -> Result<Estimate>
    where
        K: Fn(Complex64, Complex64, f64, (f64, f64)) -> Complex64,
        A: Fn((f64, f64)) -> bool,
    {
        let schedule = match &cfg.schedule {
            Some(s) if self.backend.regulated() => s.scaled(self.j.width),
            _ => {
                let r = self.integrate(&kernel, 0.0, &active, cfg.tol, cfg.max_evals)?;
                return Ok(Estimate::new(r.value, r.abs_error));
            }
        };
        let quad_error = RefCell::new(0.0f64);
        let inner_tol = cfg.tol * 0.1;
        let consistency = cfg.eps_tol.unwrap_or(cfg.tol);
        let tol = Tolerance::new(consistency).with_abs(consistency * 1e-3 * self.scale());
        let ex = eps_extrapolate(
            |eps| {
                let r = self.integrate(&kernel, eps, &active, inner_tol, cfg.max_evals)?;
                let mut e = quad_error.borrow_mut();
                *e = e.max(r.abs_error);
                Ok(r.value)
            },
            &schedule,
            &tol,
        )?;
        let amplification = lagrange_norm(&schedule);
        Ok(Estimate::new(ex.value, ex.residual + amplification * quad_error.into_inner()))
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Sum of `|l_i(0)|` over the Lagrange basis used by the extrapolation,
/// i.e. how much independent errors in the samples can grow.
fn lagrange_norm(schedule: &EpsSchedule) -> f64 {
    let xs = schedule.eps_values();
    let n = schedule.order() + 1;
    let xs = &xs[xs.len() - n..];
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&m| m != i)
                .map(|m| xs[m] / (xs[m] - xs[i]))
                .product::<f64>()
                .abs()
        })
        .sum()
}

fn check_shared(j: &DetectorParams, k: &DetectorParams) -> Result<()> {
    j.validate()?;
    k.validate()?;
    Ok(())
}

/// `I_jk^(pq)` as a full-plane double integral of the backend kernel.
pub fn i_generic(
    j: &DetectorParams,
    k: &DetectorParams,
    signs: (i8, i8),
    backend: &dyn Backend,
    cfg: &GenericConfig,
) -> Result<Estimate> {
    check_shared(j, k)?;
    let pb = Problem { j, k, p: sign(signs.0)?, q: sign(signs.1)?, domain: Domain::Plane, backend };
    pb.solve(
        |t1, t2, eps, anchor| backend.pullback(j, t1, k, t2, eps, anchor),
        |_| true,
        cfg,
    )
}

/// `J_jk^(pq)` as a time-ordered double integral of the backend kernel.
///
/// For a pointlike detector paired with itself the imaginary part diverges
/// as the regulator is removed, so that request is refused.
pub fn j_generic(
    j: &DetectorParams,
    k: &DetectorParams,
    signs: (i8, i8),
    backend: &dyn Backend,
    cfg: &GenericConfig,
) -> Result<Estimate> {
    check_shared(j, k)?;
    if backend.regulated() && separation(j, k) == 0.0 {
        return Err(Error::Divergent(
            "J for coincident pointlike worldlines; use the Y combination".into(),
        ));
    }
    let pb = Problem { j, k, p: sign(signs.0)?, q: sign(signs.1)?, domain: Domain::TimeOrdered, backend };
    pb.solve(
        |t1, t2, eps, anchor| backend.pullback(j, t1, k, t2, eps, anchor),
        |_| true,
        cfg,
    )
}

/// `lambda^2 Y_k = J_kk^(-+) + J_kk^(+-)*`.
///
/// Pointlike kernels only yield the real part, through
/// `Re[lambda^2 Y] = -(I^(-+) + I^(+-)) / 2`.
pub fn y_generic(d: &DetectorParams, backend: &dyn Backend, cfg: &GenericConfig) -> Result<YTerm> {
    if backend.regulated() {
        let mp = i_generic(d, d, (-1, 1), backend, cfg)?;
        let pm = i_generic(d, d, (1, -1), backend, cfg)?;
        return Ok(YTerm {
            re: -0.5 * (mp.value.re + pm.value.re),
            im: None,
            abs_error: 0.5 * (mp.abs_error + pm.abs_error),
        });
    }
    let mp = j_generic(d, d, (-1, 1), backend, cfg)?;
    let pm = j_generic(d, d, (1, -1), backend, cfg)?;
    let y = mp.value + pm.value.conj();
    Ok(YTerm {
        re: y.re,
        im: Some(y.im),
        abs_error: mp.abs_error + pm.abs_error,
    })
}

/// Difference between the shockwave and Minkowski values of `I_jk^(pq)`
/// (`ordered = false`) or `J_jk^(pq)` (`ordered = true`) for pointlike
/// detectors.
///
/// The difference kernel vanishes unless the two events lie on opposite
/// sides of the wavefront, so only those rectangles are integrated. Unlike
/// the full kernel it stays integrable where a worldline meets the
/// wavefront in both arguments.
pub fn shock_correction(
    j: &DetectorParams,
    k: &DetectorParams,
    signs: (i8, i8),
    ordered: bool,
    shock: &Shockwave,
    cfg: &GenericConfig,
) -> Result<Estimate> {
    check_shared(j, k)?;
    if shock.params.a == 0.0 {
        return Ok(Estimate::exact(Complex64::new(0.0, 0.0)));
    }
    let domain = if ordered { Domain::TimeOrdered } else { Domain::Plane };
    let pb = Problem { j, k, p: sign(signs.0)?, q: sign(signs.1)?, domain, backend: shock };
    pb.solve(
        |t1, t2, eps, anchor| shock.difference(j, t1, k, t2, eps, anchor),
        |anchor| shock.strength(j, k, anchor) != 0.0,
        cfg,
    )
}
