//! Closed forms for static Gaussian-switched detectors in Minkowski space.
//!
//! Every function takes the two detectors explicitly and assumes they share
//! the gap `Omega`, switching width `T` and smearing width `sigma`; the
//! separation is `L = |x_k - x_j|` and the delay `dt = t_k0 - t_j0`. The
//! remaining one-dimensional momentum integrals go through
//! [`SemiInfinite`].

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::Estimate;
use crate::detector::DetectorParams;
use crate::error::{Error, Result};
use crate::quadrature::{SemiInfinite, Tolerance};
use crate::specfun::{erf_real, faddeeva, gauss_damped_erfi, one_minus_sqrtpi_x_erfcx, FRAC_1_SQRT_PI, SQRT_PI};
use crate::wightman::separation;

/// Below this `L / T` the `sin(kL)/L` structures are replaced by their limits.
pub const SMALL_SEPARATION: f64 = 1e-6;

fn check_pair(j: &DetectorParams, k: &DetectorParams) -> Result<()> {
    if j.width != k.width || j.smearing != k.smearing || j.gap != k.gap {
        return Err(Error::Mismatch(
            "closed forms need identical gaps, switching and smearing widths".into(),
        ));
    }
    Ok(())
}

fn stretch(d: &DetectorParams) -> f64 {
    1.0 + (d.smearing / d.width).powi(2)
}

/// `exp(-T^2 Omega^2 / 2) (1 - sqrt(pi) x erfcx(x)) / (4 pi s)` with
/// `x = T Omega / sqrt(2 s)`, stable for either sign of `Omega`.
fn response(gap: f64, width: f64, s: f64) -> f64 {
    let g = 0.5 * (width * gap).powi(2);
    let x = width * gap / (2.0 * s).sqrt();
    let bracket = if x >= 0.0 {
        (-g).exp() * one_minus_sqrtpi_x_erfcx(x)
    } else {
        // erfcx(-y) = 2 exp(y^2) - erfcx(y)
        let y = -x;
        (-g).exp() * one_minus_sqrtpi_x_erfcx(y) + 2.0 * SQRT_PI * y * (x * x - g).exp()
    };
    bracket / (4.0 * PI * s)
}

/// Excitation probability `I_kk^(-+)` of a single detector.
pub fn ikk_mp_closed(d: &DetectorParams) -> f64 {
    d.coupling * d.coupling * response(d.gap, d.width, stretch(d))
}

/// De-excitation term `I_kk^(+-)`, i.e. `I_kk^(-+)` with `Omega -> -Omega`.
pub fn ikk_pm_closed(d: &DetectorParams) -> f64 {
    d.coupling * d.coupling * response(-d.gap, d.width, stretch(d))
}

/// `I_kk^(--) = lambda^2 T^2 e^{-2 i Omega t0} e^{-T^2 Omega^2/2} / (4 pi (sigma^2 + T^2))`.
pub fn ikk_mm_closed(d: &DetectorParams) -> Complex64 {
    let t = d.width;
    let mag = d.coupling.powi(2) * t * t * (-0.5 * (t * d.gap).powi(2)).exp()
        / (4.0 * PI * (d.smearing.powi(2) + t * t));
    Complex64::from_polar(mag, -2.0 * d.gap * d.center)
}

/// `I_kk^(++)`, the conjugate phase of [`ikk_mm_closed`].
pub fn ikk_pp_closed(d: &DetectorParams) -> Complex64 {
    ikk_mm_closed(d).conj()
}

/// `Re[lambda^2 Y_k]`; never positive.
pub fn y_re_closed(d: &DetectorParams) -> f64 {
    let s = stretch(d);
    let g = 0.5 * (d.width * d.gap).powi(2);
    let x = d.width * d.gap / (2.0 * s).sqrt();
    let bracket = (-g).exp() + SQRT_PI * x * (x * x - g).exp() * erf_real(x);
    -d.coupling.powi(2) * bracket / (4.0 * PI * s)
}

/// `Im[lambda^2 Y_k]` as a momentum integral of Gaussian-damped `erfi`.
///
/// The integrand decays only like `1/k` without smearing, so pointlike
/// detectors give a divergence error.
pub fn y_im_closed(d: &DetectorParams, tol: f64) -> Result<Estimate> {
    if d.smearing == 0.0 {
        return Err(Error::Divergent(
            "Im[Y] of a pointlike detector diverges logarithmically".into(),
        ));
    }
    let (t, s, w) = (d.width, d.smearing, d.gap);
    let a = t / SQRT_2;
    let f = |k: f64| {
        let v = k * (-0.5 * (k * s).powi(2)).exp() * (gauss_damped_erfi(a * (k - w)) - gauss_damped_erfi(a * (k + w)));
        Complex64::new(v, 0.0)
    };
    let r = SemiInfinite::new(1.0 / s, Tolerance::new(tol))
        .centered(w.abs())
        .integrate(f)?;
    let c = -d.coupling.powi(2) * t * t / (8.0 * PI);
    Ok(Estimate::new(Complex64::new(0.0, c * r.value.re), c.abs() * r.abs_error))
}

/// `lambda^2 Y_k = J_kk^(-+) + J_kk^(+-)*` for a smeared detector.
pub fn y_closed(d: &DetectorParams, tol: f64) -> Result<Estimate> {
    let im = y_im_closed(d, tol)?;
    Ok(Estimate::new(Complex64::new(y_re_closed(d), im.value.im), im.abs_error))
}

/// `I_jk^(++)` from the Faddeeva form of `e^{-G^2} erfc(+-iG)`.
///
/// For `L -> 0` the bracket divided by `L` tends to `-(2/c) w'(dt/c)`.
pub fn ijk_pp_closed(j: &DetectorParams, k: &DetectorParams) -> Result<Complex64> {
    check_pair(j, k)?;
    let (t, w) = (j.width, j.gap);
    let s = stretch(j);
    let l = separation(j, k);
    let dt = k.center - j.center;
    let c = t * (2.0 * s).sqrt();
    // bracket / L
    let ratio = if l > SMALL_SEPARATION * t {
        let gm = (l - dt) / c;
        let gp = (l + dt) / c;
        (faddeeva(Complex64::new(-gm, 0.0)) - faddeeva(Complex64::new(gp, 0.0))) / l
    } else {
        let z = Complex64::new(dt / c, 0.0);
        let dw = -2.0 * z * faddeeva(z) + Complex64::new(0.0, 2.0 * FRAC_1_SQRT_PI);
        -2.0 / c * dw
    };
    let mag = j.coupling * k.coupling * t * (-0.5 * (t * w).powi(2)).exp() / (8.0 * PI * s.sqrt()) * (PI / 2.0).sqrt();
    Ok(Complex64::new(0.0, mag) * Complex64::from_polar(1.0, w * (j.center + k.center)) * ratio)
}

/// `I_jk^(--)`, i.e. `I_jk^(++)` with `Omega -> -Omega`.
pub fn ijk_mm_closed(j: &DetectorParams, k: &DetectorParams) -> Result<Complex64> {
    ijk_pp_closed(&flip(j), &flip(k))
}

fn flip(d: &DetectorParams) -> DetectorParams {
    DetectorParams { gap: -d.gap, ..*d }
}

/// `J_jk^(--)` as a momentum integral of the Faddeeva function.
///
/// Without smearing the integrand falls off like `sin(kL)/k` and the tail
/// is summed with sequence acceleration. `L = 0` is only finite for
/// smeared detectors.
pub fn jjk_mm_closed(j: &DetectorParams, k: &DetectorParams, tol: f64) -> Result<Estimate> {
    check_pair(j, k)?;
    let (t, w, s) = (j.width, j.gap, j.smearing);
    let l = separation(j, k);
    let dt = k.center - j.center;
    let small = l <= SMALL_SEPARATION * t;
    if small && s == 0.0 {
        return Err(Error::DegenerateSeparation(
            "J_jk at zero separation diverges for pointlike detectors".into(),
        ));
    }
    let x0 = dt / (SQRT_2 * t);
    let damp = (-x0 * x0).exp();
    // exp(-x0^2) w(-y + i x0), reflected into the upper half-plane when dt < 0
    let envelope = move |y: f64| {
        if dt >= 0.0 {
            damp * faddeeva(Complex64::new(-y, x0))
        } else {
            2.0 * Complex64::from_polar((-y * y).exp(), 2.0 * x0 * y) - damp * faddeeva(Complex64::new(y, -x0))
        }
    };
    let f = move |q: f64| {
        let shape = if small { q } else { (q * l).sin() / l };
        envelope(q * t / SQRT_2) * ((-0.5 * (q * s).powi(2)).exp() * shape)
    };
    let tolerance = Tolerance::new(tol);
    let mut cfg = SemiInfinite::new(if s > 0.0 { (1.0 / s).max(1.0 / t) } else { 1.0 / t }, tolerance);
    if !small {
        cfg = cfg.oscillating(PI / l);
        if s == 0.0 {
            cfg = cfg.algebraic_tail();
        }
    }
    let r = cfg.integrate(f)?;
    let pre = Complex64::from_polar(
        -j.coupling * k.coupling * t * t / (8.0 * PI) * (-0.5 * (t * w).powi(2)).exp(),
        -w * (j.center + k.center),
    );
    Ok(Estimate::new(pre * r.value, pre.norm() * r.abs_error))
}

/// `J_jk^(++)`, i.e. `J_jk^(--)` with `Omega -> -Omega`.
pub fn jjk_pp_closed(j: &DetectorParams, k: &DetectorParams, tol: f64) -> Result<Estimate> {
    jjk_mm_closed(&flip(j), &flip(k), tol)
}

/// `I_jk^(pq)` for any signs as a single Gaussian-damped momentum integral,
/// `lambda_j lambda_k T^2 / (4 pi) int dk k e^{-k^2 sigma^2/2} sinc(kL)
///  e^{i(p Omega - k) t_j} e^{i(q Omega + k) t_k} e^{-T^2 ((p Omega - k)^2 + (q Omega + k)^2) / 4}`.
pub fn ijk_momentum(j: &DetectorParams, k: &DetectorParams, signs: (i8, i8), tol: f64) -> Result<Estimate> {
    check_pair(j, k)?;
    let (t, w, s) = (j.width, j.gap, j.smearing);
    let (p, q) = (f64::from(signs.0) * w, f64::from(signs.1) * w);
    let l = separation(j, k);
    let (tj, tk) = (j.center, k.center);
    let f = move |x: f64| {
        let sinc = if l * x == 0.0 { 1.0 } else { (x * l).sin() / (x * l) };
        let gauss = -0.25 * t * t * ((p - x).powi(2) + (q + x).powi(2)) - 0.5 * (x * s).powi(2);
        Complex64::from_polar(x * sinc * gauss.exp(), (p - x) * tj + (q + x) * tk)
    };
    // the envelope peaks at k = (p - q) / 2
    let center = 0.5 * (p - q);
    let spread = l + (tk - tj).abs();
    let mut cfg = SemiInfinite::new(SQRT_2 / t, Tolerance::new(tol)).centered(center.max(0.0));
    if spread > 0.0 {
        cfg = cfg.oscillating(PI / spread);
    }
    let r = cfg.integrate(f)?;
    let c = j.coupling * k.coupling * t * t / (4.0 * PI);
    Ok(Estimate::new(r.value * c, r.abs_error * c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(gap: f64, center: f64, z: f64, sigma: f64) -> DetectorParams {
        DetectorParams::pointlike(0.1, gap, center, z).with_smearing(sigma)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn excitation_examples() {
        let d = DetectorParams::pointlike(1.0, 0.0, 0.0, 0.0);
        assert!((ikk_mp_closed(&d) - 1.0 / (4.0 * PI)).abs() < 1e-16);
        assert!((y_re_closed(&d) + 1.0 / (4.0 * PI)).abs() < 1e-16);
        let mut last = f64::INFINITY;
        for w in [-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0] {
            let v = ikk_mp_closed(&det(w, 0.0, 0.0, 0.0));
            assert!(v >= 0.0 && v < last, "{w}: {v} {last}");
            last = v;
        }
        // de-excitation grows linearly with the gap
        let big = ikk_pm_closed(&det(40.0, 0.0, 0.0, 0.0)) / ikk_pm_closed(&det(20.0, 0.0, 0.0, 0.0));
        assert!((big - 2.0).abs() < 0.05);
    }

    #[test]
    fn y_identity() {
        for (w, s) in [(3.0, 0.5), (0.0, 0.0), (-2.0, 1.0), (12.0, 0.1)] {
            let d = det(w, 0.0, 0.0, s);
            let lhs = y_re_closed(&d);
            let rhs = -(ikk_mp_closed(&d) + ikk_pm_closed(&d)) / 2.0;
            assert!((lhs - rhs).abs() <= 1e-14 * rhs.abs(), "{w} {s}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn y_im_pointlike_diverges() {
        assert!(matches!(y_im_closed(&det(2.0, 0.0, 0.0, 0.0), 1e-8), Err(Error::Divergent(_))));
        assert!(y_im_closed(&det(2.0, 0.0, 0.0, 0.5), 1e-8).is_ok());
        // no gap, no imaginary part
        assert!(y_im_closed(&det(0.0, 0.0, 0.0, 0.5), 1e-8).unwrap().value.norm() < 1e-15);
    }

    #[test]
    fn degradation_grows_with_gap() {
        let r = |w: f64| -y_re_closed(&det(w, 0.0, 0.0, 0.0)) / (0.01 * w);
        assert!((r(20.0) / r(40.0) - 1.0).abs() < 0.1);
    }

    #[test]
    fn i_closed_forms_match_momentum_integrals() {
        for (w, dt, l, s) in [(5.0, 0.0, 7.0, 0.0), (2.0, 1.5, 1.0, 0.3), (1.0, -2.0, 3.0, 1.0), (0.5, 0.7, 0.0, 0.4)] {
            let a = det(w, 0.0, 0.0, s);
            let b = det(w, dt, l, s);
            let pp = ijk_momentum(&a, &b, (1, 1), 1e-12).unwrap().value;
            assert!(rel(ijk_pp_closed(&a, &b).unwrap(), pp) < 1e-9, "{pp}");
            let mm = ijk_momentum(&a, &b, (-1, -1), 1e-12).unwrap().value;
            assert!(rel(ijk_mm_closed(&a, &b).unwrap(), mm) < 1e-9);
        }
        let d = det(2.0, 0.3, 0.0, 0.5);
        let mp = ijk_momentum(&d, &d, (-1, 1), 1e-12).unwrap().value;
        assert!(rel(Complex64::new(ikk_mp_closed(&d), 0.0), mp) < 1e-10);
        let pm = ijk_momentum(&d, &d, (1, -1), 1e-12).unwrap().value;
        assert!(rel(Complex64::new(ikk_pm_closed(&d), 0.0), pm) < 1e-10);
        let mm = ijk_momentum(&d, &d, (-1, -1), 1e-12).unwrap().value;
        assert!(rel(ikk_mm_closed(&d), mm) < 1e-10);
    }

    #[test]
    fn i_symmetry_and_large_separation() {
        let a = det(5.0, 0.0, 0.0, 0.0);
        let b = det(5.0, 1.2, 7.0, 0.0);
        let ab = ijk_pp_closed(&a, &b).unwrap();
        let ba = ijk_mm_closed(&b, &a).unwrap();
        assert!(rel(ab, ba.conj()) < 1e-14);
        let far = det(5.0, 0.0, 40.0, 0.0);
        let v = ijk_pp_closed(&a, &far).unwrap();
        assert!(v.norm().is_finite() && v.norm() < ab.norm());
    }

    #[test]
    fn small_separation_limit_is_continuous() {
        let a = det(1.5, 0.0, 0.0, 0.5);
        let near = det(1.5, 0.8, 1.0001e-6, 0.5);
        let at = det(1.5, 0.8, 0.0, 0.5);
        let x = ijk_pp_closed(&a, &near).unwrap();
        let y = ijk_pp_closed(&a, &at).unwrap();
        assert!(rel(x, y) < 1e-8);
        let x = jjk_mm_closed(&a, &near, 1e-11).unwrap().value;
        let y = jjk_mm_closed(&a, &at, 1e-11).unwrap().value;
        assert!(rel(x, y) < 1e-7, "{x} {y}");
        assert!(matches!(
            jjk_mm_closed(&det(1.0, 0.0, 0.0, 0.0), &det(1.0, 0.0, 0.0, 0.0), 1e-8),
            Err(Error::DegenerateSeparation(_))
        ));
    }

    #[test]
    fn j_vanishes_fast_with_gap() {
        let v = |w: f64| jjk_mm_closed(&det(w, 0.0, 0.0, 0.0), &det(w, 0.0, 1.0, 0.0), 1e-9).unwrap().value.norm();
        assert!(v(8.0) / v(4.0) < 1e-9);
    }

    #[test]
    fn mismatched_detectors_are_rejected() {
        let a = det(1.0, 0.0, 0.0, 0.0);
        let b = det(2.0, 0.0, 1.0, 0.0);
        assert!(matches!(ijk_pp_closed(&a, &b), Err(Error::Mismatch(_))));
    }
}
