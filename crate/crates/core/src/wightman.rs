//! Vacuum Wightman functions of a massless scalar in four dimensions.
//!
//! Two spacetimes are covered: Minkowski space and the planar gravitational
//! shockwave with quadratic transverse profile `a (x^2 + y^2) / 2` glued
//! across the null plane `u = u0`. The regulator `eps` enters exactly as
//!
//! ```text
//! W = -1/(4 pi^2) * prod_i (1 + a dTheta (u - u0 - i eps)(U - u0 + i eps) / (du - i eps))^{-1/2}
//!     / ((dv - i eps)(du - i eps) - |dx|^2 + sum_i a dTheta (B x_i - A X_i)^2 / (du - i eps + a dTheta A B))
//! ```
//!
//! with `A = u - u0 - i eps`, `B = U - u0 + i eps`, `dTheta = Theta(u - u0) - Theta(U - u0)`
//! and `Theta(0) = 1/2`. Each transverse factor uses the principal square
//! root. For equal eigenvalues the two factors multiply to the reciprocal
//! of their common radicand, so no branch ambiguity survives on the axis;
//! off the axis the principal branch is a convention.
//!
//! For the double integrals the Wightman function is also exposed through
//! [`Backend`], which pulls it back to two static detectors and may be
//! evaluated at complex times.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::detector::{DetectorParams, Spacetime};
use crate::error::{Error, Result};
use crate::specfun::{faddeeva, SQRT_PI};

pub const NORM: f64 = 1.0 / (4.0 * PI * PI);
const POLE_WARNING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeEvent {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpacetimeEvent {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        SpacetimeEvent { t, x, y, z }
    }

    /// Event on the `z` axis.
    pub fn on_axis(t: f64, z: f64) -> Self {
        SpacetimeEvent { t, x: 0.0, y: 0.0, z }
    }

    pub fn u(&self) -> f64 {
        self.t - self.z
    }

    pub fn v(&self) -> f64 {
        self.t + self.z
    }
}

/// Quadratic shockwave profile with equal transverse eigenvalues `a`,
/// located at `u = u0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockwaveParams {
    pub a: f64,
    pub u0: f64,
}

impl ShockwaveParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a >= 0.0) || !self.a.is_finite() || !self.u0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "shockwave needs finite a >= 0 and u0, got a = {}, u0 = {}",
                self.a, self.u0
            )));
        }
        Ok(())
    }
}

/// `Theta(x)` with `Theta(0) = 1/2`.
pub fn heaviside(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        0.0
    } else {
        0.5
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("regulator eps = {eps} must be positive")))
    }
}

/// `-1 / (4 pi^2) / ((dt - i eps)^2 - |dx|^2)` with `dt = x.t - y.t`.
pub fn wightman_minkowski(x: &SpacetimeEvent, y: &SpacetimeEvent, eps: f64) -> Result<Complex64> {
    check_eps(eps)?;
    let dt = Complex64::new(x.t - y.t, -eps);
    let r2 = (x.x - y.x).powi(2) + (x.y - y.y).powi(2) + (x.z - y.z).powi(2);
    Ok(-NORM / (dt * dt - r2))
}

/// Shockwave Wightman function, general transverse positions.
pub fn wightman_shockwave(x: &SpacetimeEvent, y: &SpacetimeEvent, p: &ShockwaveParams, eps: f64) -> Result<Complex64> {
    check_eps(eps)?;
    p.validate()?;
    let jump = heaviside(x.u() - p.u0) - heaviside(y.u() - p.u0);
    if p.a == 0.0 || jump == 0.0 {
        return wightman_minkowski(x, y, eps);
    }
    let i_eps = Complex64::new(0.0, eps);
    let big_a = x.u() - p.u0 - i_eps;
    let big_b = y.u() - p.u0 + i_eps;
    let du = x.u() - y.u() - i_eps;
    let dv = x.v() - y.v() - i_eps;
    let s = p.a * jump;

    let radicand = 1.0 + s * big_a * big_b / du;
    let root = radicand.sqrt();
    let prefactor = (root * root).inv();

    let shifted = du + s * big_a * big_b;
    let mut bracket = dv * du - (x.x - y.x).powi(2) - (x.y - y.y).powi(2);
    for (xi, yi) in [(x.x, y.x), (x.y, y.y)] {
        let d = big_b * xi - big_a * yi;
        bracket += s * d * d / shifted;
    }
    if (bracket * radicand).norm() < POLE_WARNING {
        log::warn!("shockwave Wightman function evaluated within 1e-12 of a pole");
    }
    Ok(-NORM * prefactor / bracket)
}

/// Shockwave Wightman function for two events on the `z` axis, written
/// in the reduced on-axis form.
pub fn wightman_shockwave_on_axis(x: &SpacetimeEvent, y: &SpacetimeEvent, p: &ShockwaveParams, eps: f64) -> Result<Complex64> {
    check_eps(eps)?;
    p.validate()?;
    if x.x != 0.0 || x.y != 0.0 || y.x != 0.0 || y.y != 0.0 {
        return Err(Error::Domain("on-axis formula needs vanishing transverse coordinates".into()));
    }
    let jump = heaviside(x.u() - p.u0) - heaviside(y.u() - p.u0);
    let i_eps = Complex64::new(0.0, eps);
    let du = x.u() - y.u() - i_eps;
    let dv = x.v() - y.v() - i_eps;
    let shock = 1.0 + p.a * jump * (x.u() - p.u0 - i_eps) * (y.u() - p.u0 + i_eps) / du;
    Ok(-NORM / (shock * dv * du))
}

/// The Wightman function pulled back to two static detectors,
/// `W(x_j(t1), x_k(t2))`.
///
/// Times may be complex. A backend that reports [`Backend::deformable`]
/// is analytic in `t1` below and in `t2` above the real axis within each
/// region bounded by the real times returned by [`Backend::pins`]. Which
/// region's analytic form is used is decided by the real point `anchor`,
/// so that contours running along a region boundary stay on one side.
pub trait Backend: Sync {
    fn pullback(
        &self,
        j: &DetectorParams,
        t1: Complex64,
        k: &DetectorParams,
        t2: Complex64,
        eps: f64,
        anchor: (f64, f64),
    ) -> Complex64;

    /// Evaluation at real times, in the region containing them.
    fn pullback_real(&self, j: &DetectorParams, t1: f64, k: &DetectorParams, t2: f64, eps: f64) -> Complex64 {
        let c = |t: f64| Complex64::new(t, 0.0);
        self.pullback(j, c(t1), k, c(t2), eps, (t1, t2))
    }

    /// The kernel carries an `i eps` regulator to be extrapolated away.
    fn regulated(&self) -> bool;

    /// Integration contours may leave the real axis.
    fn deformable(&self) -> bool;

    /// Real times on the worldline of `d` where the kernel changes form.
    fn pins(&self, _d: &DetectorParams) -> Vec<f64> {
        Vec::new()
    }

    /// Real parts of the `t2` singularities for given `t1`, used as panel
    /// break points.
    fn singular_times(&self, j: &DetectorParams, t1: Complex64, k: &DetectorParams) -> Vec<f64>;

    fn name(&self) -> &'static str;
}

pub(crate) fn separation(j: &DetectorParams, k: &DetectorParams) -> f64 {
    let d: f64 = (0..3).map(|i| (j.position[i] - k.position[i]).powi(2)).sum();
    d.sqrt()
}

/// Pointlike Minkowski kernel `-1/(4 pi^2) / ((t1 - t2 - i eps)^2 - L^2)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MinkowskiPointlike;

impl Backend for MinkowskiPointlike {
    fn pullback(
        &self,
        j: &DetectorParams,
        t1: Complex64,
        k: &DetectorParams,
        t2: Complex64,
        eps: f64,
        _anchor: (f64, f64),
    ) -> Complex64 {
        let l = separation(j, k);
        let dt = t1 - t2 - Complex64::new(0.0, eps);
        -NORM / (dt * dt - l * l)
    }

    fn regulated(&self) -> bool {
        true
    }

    fn deformable(&self) -> bool {
        true
    }

    fn singular_times(&self, j: &DetectorParams, t1: Complex64, k: &DetectorParams) -> Vec<f64> {
        let l = separation(j, k);
        vec![t1.re - l, t1.re + l]
    }

    fn name(&self) -> &'static str {
        "minkowski"
    }
}

/// Minkowski kernel for two Gaussian-smeared detectors of width `sigma`,
/// from the mode sum
/// `1/(4 pi^2) int_0^inf dk k e^{-i k tau} e^{-k^2 sigma^2 / 2} sinc(k L)`.
///
/// The kernel is entire in `tau = t1 - t2` and bounded for `Im tau <= 0`,
/// which is the half-plane reached by the standard contour shifts.
#[derive(Debug, Clone, Copy)]
pub struct MinkowskiSmeared {
    pub sigma: f64,
}

impl MinkowskiSmeared {
    pub fn kernel(&self, tau: Complex64, l: f64) -> Complex64 {
        let s = self.sigma;
        let scale = std::f64::consts::SQRT_2 * s;
        if l > 1e-6 * s {
            let w1 = faddeeva((l - tau) / scale);
            let w2 = faddeeva(-(l + tau) / scale);
            let c = NORM / l * (PI / (2.0 * s * s)).sqrt() * 0.5;
            // (w1 - w2) / (2 i)
            (w1 - w2) * Complex64::new(0.0, -c)
        } else {
            let z = -tau / scale;
            NORM / (s * s) * (1.0 + Complex64::new(0.0, SQRT_PI) * z * faddeeva(z))
        }
    }
}

impl Backend for MinkowskiSmeared {
    fn pullback(
        &self,
        j: &DetectorParams,
        t1: Complex64,
        k: &DetectorParams,
        t2: Complex64,
        _eps: f64,
        _anchor: (f64, f64),
    ) -> Complex64 {
        self.kernel(t1 - t2, separation(j, k))
    }

    fn regulated(&self) -> bool {
        false
    }

    fn deformable(&self) -> bool {
        true
    }

    fn singular_times(&self, j: &DetectorParams, t1: Complex64, k: &DetectorParams) -> Vec<f64> {
        // light-cone ridges of the smeared kernel
        let l = separation(j, k);
        vec![t1.re - l, t1.re + l]
    }

    fn name(&self) -> &'static str {
        "minkowski_smeared"
    }
}

/// Shockwave kernel for pointlike static detectors.
#[derive(Debug, Clone, Copy)]
pub struct Shockwave {
    pub params: ShockwaveParams,
}

impl Shockwave {
    /// `a dTheta` for the region containing the real point `anchor`.
    pub fn strength(&self, j: &DetectorParams, k: &DetectorParams, anchor: (f64, f64)) -> f64 {
        let u0 = self.params.u0;
        let jump = heaviside(anchor.0 - j.position[2] - u0) - heaviside(anchor.1 - k.position[2] - u0);
        self.params.a * jump
    }

    /// `W_shock - W_Minkowski` in the region of `anchor`; zero unless the
    /// two events straddle the wavefront.
    pub fn difference(
        &self,
        j: &DetectorParams,
        t1: Complex64,
        k: &DetectorParams,
        t2: Complex64,
        eps: f64,
        anchor: (f64, f64),
    ) -> Complex64 {
        let s = self.strength(j, k, anchor);
        if s == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let (xj, xk) = (j.position, k.position);
        if xj[0] == 0.0 && xj[1] == 0.0 && xk[0] == 0.0 && xk[1] == 0.0 {
            let i_eps = Complex64::new(0.0, eps);
            let u0 = self.params.u0;
            let (u, uu) = (t1 - xj[2], t2 - xk[2]);
            let du = u - uu - i_eps;
            let dv = t1 + xj[2] - t2 - xk[2] - i_eps;
            let ab = (u - u0 - i_eps) * (uu - u0 + i_eps);
            NORM * s * ab / ((du + s * ab) * du * dv)
        } else {
            self.pullback(j, t1, k, t2, eps, anchor) - MinkowskiPointlike.pullback(j, t1, k, t2, eps, anchor)
        }
    }
}

impl Backend for Shockwave {
    fn pullback(
        &self,
        j: &DetectorParams,
        t1: Complex64,
        k: &DetectorParams,
        t2: Complex64,
        eps: f64,
        anchor: (f64, f64),
    ) -> Complex64 {
        let (xj, xk) = (j.position, k.position);
        let u = t1 - xj[2];
        let uu = t2 - xk[2];
        let i_eps = Complex64::new(0.0, eps);
        let du = u - uu - i_eps;
        let dv = t1 + xj[2] - t2 - xk[2] - i_eps;
        let (dx, dy) = (xj[0] - xk[0], xj[1] - xk[1]);
        let s = self.strength(j, k, anchor);
        if s == 0.0 {
            return -NORM / (du * dv - dx * dx - dy * dy);
        }
        let big_a = u - self.params.u0 - i_eps;
        let big_b = uu - self.params.u0 + i_eps;
        let shifted = du + s * big_a * big_b;
        let mut bracket = dv * du - dx * dx - dy * dy;
        for (p, q) in [(xj[0], xk[0]), (xj[1], xk[1])] {
            let d = big_b * p - big_a * q;
            bracket += s * d * d / shifted;
        }
        // both transverse square roots together give du / shifted
        -NORM * du / (shifted * bracket)
    }

    fn regulated(&self) -> bool {
        true
    }

    fn deformable(&self) -> bool {
        true
    }

    fn pins(&self, d: &DetectorParams) -> Vec<f64> {
        if self.params.a == 0.0 {
            Vec::new()
        } else {
            vec![d.position[2] + self.params.u0]
        }
    }

    fn singular_times(&self, j: &DetectorParams, t1: Complex64, k: &DetectorParams) -> Vec<f64> {
        let (zj, zk) = (j.position[2], k.position[2]);
        let mut out = vec![t1.re - zj + zk, t1.re + zj - zk];
        if self.params.a > 0.0 {
            // du + a dTheta A B = 0 is linear in U
            let u0 = self.params.u0;
            let shifted_u = t1 - zj - u0;
            for s in [self.params.a, -self.params.a] {
                let big_u = shifted_u / (1.0 - s * shifted_u) + u0;
                if big_u.re.is_finite() {
                    out.push(big_u.re + zk);
                }
            }
        }
        out
    }

    fn name(&self) -> &'static str {
        "shockwave"
    }
}

/// The backend matching a spacetime and detector smearing.
pub fn backend_for(spacetime: &Spacetime, smearing: f64) -> Result<Box<dyn Backend>> {
    match spacetime {
        Spacetime::Minkowski if smearing > 0.0 => Ok(Box::new(MinkowskiSmeared { sigma: smearing })),
        Spacetime::Minkowski => Ok(Box::new(MinkowskiPointlike)),
        Spacetime::Shockwave(p) if smearing == 0.0 => {
            p.validate()?;
            Ok(Box::new(Shockwave { params: *p }))
        }
        Spacetime::Shockwave(_) => Err(Error::Regime("shockwave kernels are pointlike only".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{SemiInfinite, Tolerance};

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn minkowski_examples() {
        let o = SpacetimeEvent::new(0.0, 0.0, 0.0, 0.0);
        let eps = 1e-3;
        let w = wightman_minkowski(&o, &o, eps).unwrap();
        assert!((w.re - NORM / (eps * eps)).abs() < 1e-9 * w.re && w.im == 0.0);

        let x = SpacetimeEvent::new(0.0, 1.0, 0.0, 0.0);
        let w = wightman_minkowski(&x, &o, 1e-9).unwrap();
        assert!((w.re - NORM).abs() < 1e-12);

        let later = SpacetimeEvent::new(1.0, 0.0, 0.0, 0.0);
        let w = wightman_minkowski(&later, &o, 1e-6).unwrap();
        let back = wightman_minkowski(&o, &later, 1e-6).unwrap();
        assert!((w.re + NORM).abs() < 1e-9);
        assert!((w.im + back.im).abs() < 1e-15 && w.im != 0.0);
        assert!(wightman_minkowski(&o, &o, 0.0).is_err());
    }

    #[test]
    fn shockwave_reduces_to_minkowski() {
        let x = SpacetimeEvent::new(0.3, 0.1, -0.2, -1.0);
        let y = SpacetimeEvent::new(-0.7, 0.4, 0.0, 2.0);
        let m = wightman_minkowski(&x, &y, 1e-2).unwrap();
        let flat = ShockwaveParams { a: 0.0, u0: 0.0 };
        assert_eq!(wightman_shockwave(&x, &y, &flat, 1e-2).unwrap(), m);
        // both events before the wavefront
        let far = ShockwaveParams { a: 1.0, u0: 10.0 };
        assert_eq!(wightman_shockwave(&x, &y, &far, 1e-2).unwrap(), m);
    }

    #[test]
    fn general_and_on_axis_agree_when_straddling() {
        for a in [0.5, 1.0, 2.0] {
            let p = ShockwaveParams { a, u0: 0.0 };
            let x = SpacetimeEvent::on_axis(1.0, -0.5);
            let y = SpacetimeEvent::on_axis(0.2, 3.0);
            assert!(x.u() > 0.0 && y.u() < 0.0);
            let g = wightman_shockwave(&x, &y, &p, 1e-2).unwrap();
            let r = wightman_shockwave_on_axis(&x, &y, &p, 1e-2).unwrap();
            assert!(rel(g, r) < 1e-13, "{g} vs {r}");
        }
    }

    #[test]
    fn hermitian_on_wavefront() {
        let p = ShockwaveParams { a: 1.0, u0: 0.0 };
        let x = SpacetimeEvent::on_axis(0.5, 0.5);
        let y = SpacetimeEvent::on_axis(2.0, -1.0);
        let xy = wightman_shockwave(&x, &y, &p, 1e-2).unwrap();
        let yx = wightman_shockwave(&y, &x, &p, 1e-2).unwrap();
        assert!(rel(xy, yx.conj()) < 1e-13);
    }

    #[test]
    fn backends_match_event_functions() {
        let p = ShockwaveParams { a: 1.0, u0: 0.3 };
        let j = DetectorParams::pointlike(0.1, 2.0, 0.0, -0.5).with_smearing(0.0);
        let k = DetectorParams::pointlike(0.1, 2.0, 0.0, 7.0);
        let b = Shockwave { params: p };
        for (t1, t2) in [(1.0, 0.0), (-2.0, 3.0), (0.8, 7.3), (4.0, 10.0)] {
            let x = SpacetimeEvent::on_axis(t1, -0.5);
            let y = SpacetimeEvent::on_axis(t2, 7.0);
            let direct = wightman_shockwave(&x, &y, &p, 1e-2).unwrap();
            let pulled = b.pullback_real(&j, t1, &k, t2, 1e-2);
            assert!(rel(pulled, direct) < 1e-13);
            let m = MinkowskiPointlike.pullback_real(&j, t1, &k, t2, 1e-2);
            assert!(rel(m, wightman_minkowski(&x, &y, 1e-2).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn smeared_kernel_matches_mode_sum() {
        let b = MinkowskiSmeared { sigma: 0.5 };
        let tol = Tolerance::new(1e-12);
        for (tau, l) in [(0.0, 0.0), (0.7, 0.0), (1.0, 2.0), (-3.0, 2.5), (2.5, 2.5)] {
            let k = b.kernel(Complex64::new(tau, 0.0), l);
            let f = move |x: f64| {
                let sinc = if l == 0.0 { 1.0 } else { (x * l).sin() / (x * l) };
                Complex64::from_polar(x * (-x * x * 0.125).exp() * sinc, -x * tau)
            };
            let half = if l > 0.0 { PI / l } else { PI / tau.abs().max(1.0) };
            let r = SemiInfinite::new(2.0, tol).oscillating(half).integrate(f).unwrap();
            assert!(rel(k, r.value * NORM) < 1e-9, "tau={tau} l={l}: {k} vs {}", r.value * NORM);
        }
    }

    #[test]
    fn shock_pole_is_reported() {
        let p = ShockwaveParams { a: 1.0, u0: 0.0 };
        let b = Shockwave { params: p };
        let j = DetectorParams::pointlike(0.1, 2.0, 0.0, -0.5);
        let k = DetectorParams::pointlike(0.1, 2.0, 0.0, 7.0);
        let t1 = Complex64::new(0.0, 0.0);
        // u = 0.5 > u0; pole where 0.5 - U + 0.5 * U = 0 -> U = 1
        let times = b.singular_times(&j, t1, &k);
        assert!(times.iter().any(|&t| (t - 8.0).abs() < 1e-12), "{times:?}");
    }

    #[test]
    fn difference_matches_subtraction() {
        let b = Shockwave { params: ShockwaveParams { a: 1.0, u0: 0.2 } };
        let j = DetectorParams::pointlike(0.1, 2.0, 0.0, -0.5);
        let k = DetectorParams::pointlike(0.1, 2.0, 0.0, 7.0);
        let t1 = Complex64::new(1.3, -0.4);
        let t2 = Complex64::new(0.1, 0.7);
        let anchor = (1.3, 0.1);
        let d = b.difference(&j, t1, &k, t2, 1e-3, anchor);
        let full = b.pullback(&j, t1, &k, t2, 1e-3, anchor) - MinkowskiPointlike.pullback(&j, t1, &k, t2, 1e-3, anchor);
        assert!(d.norm() > 1e-6);
        assert!(rel(d, full) < 1e-12, "{d} vs {full}");
        assert_eq!(b.difference(&j, t1, &k, t2, 1e-3, (-3.0, 0.1)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn smeared_kernel_continues_below_the_axis() {
        let b = MinkowskiSmeared { sigma: 0.7 };
        let tol = Tolerance::new(1e-12);
        for (tau, l) in [(Complex64::new(0.5, -0.8), 1.5), (Complex64::new(-1.0, -0.3), 0.0)] {
            let f = move |x: f64| {
                let sinc = if l == 0.0 { 1.0 } else { (x * l).sin() / (x * l) };
                (Complex64::new(0.0, -x) * tau).exp() * x * (-x * x * 0.245).exp() * sinc
            };
            let r = SemiInfinite::new(1.0 / 0.7, tol).oscillating(PI / 1.5).integrate(f).unwrap();
            assert!(rel(b.kernel(tau, l), r.value * NORM) < 1e-9);
        }
    }
}
