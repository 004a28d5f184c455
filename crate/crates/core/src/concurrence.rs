//! Concurrence of the final two-detector state.
//!
//! For an X-shaped density matrix the concurrence is
//! `2 max(0, |r14| - sqrt(r22 r33))`. Pointlike detectors leave `Im[Y]`
//! undefined, so `|r14|^2` is replaced by one of three expansions in which
//! that imaginary part drops out. Each expansion is reported split into
//! the part present before the interaction, a part linear in the
//! nonlocal term `X` whose sign follows the phase `theta`, the pure
//! harvesting part `|X|^2` and the degradation part driven by `Re[Y]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::detector::{initial_concurrence, InitialState, Regime, Scenario};
use crate::elements::{self, assemble, DensityMatrix, ElementCache, ElementConfig, MatrixElements};
use crate::error::{Error, Result};
use crate::Real;

/// Residues of `r22` and `r33` above this are treated as rounding.
pub const NEGATIVE_ROUNDING: f64 = -1e-14;

/// The four contributions to `|r14|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct R14Parts<R> {
    pub initial: R,
    pub neutral: R,
    pub harvesting: R,
    pub degradation: R,
}

impl<R: Real> R14Parts<R> {
    pub fn total(&self) -> R {
        self.initial + self.neutral + self.harvesting + self.degradation
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceReport {
    pub c_initial: f64,
    pub c_final: f64,
    /// `c_final - c_initial`
    pub delta: f64,
    /// The regime actually used, never `Auto`.
    pub regime: Regime,
    pub parts: R14Parts<f64>,
    pub r22r33_sqrt: f64,
    /// `r11 r44 - |r23|^2`
    pub r23_margin: f64,
}

/// `2 max(0, sqrt(|r14|^2) - sqrt(r22 r33))`, capped at one.
pub fn x_state_concurrence<R: Real>(r14_sq: R, r22: R, r33: R) -> R {
    let zero = R::zero();
    let c = R::lit(2.0) * (r14_sq.max(zero).sqrt() - r22r33_sqrt(r22, r33)).max(zero);
    c.min(R::one())
}

/// `sqrt(r22 r33)` after clamping tiny negative residues.
pub fn r22r33_sqrt<R: Real>(r22: R, r33: R) -> R {
    let clamp = |r: R| if r < R::zero() && r > R::lit(NEGATIVE_ROUNDING) { R::zero() } else { r };
    (clamp(r22) * clamp(r33)).max(R::zero()).sqrt()
}

impl<R: Real> DensityMatrix<R> {
    /// Concurrence from the full `|r14|`; `None` when `r14` is unavailable.
    pub fn concurrence(&self) -> Option<R> {
        self.r14.map(|r| x_state_concurrence(r.norm_sqr(), self.r22, self.r33))
    }
}

struct Inputs {
    alpha: f64,
    beta: f64,
    phase: Complex64,
    x_pos: Complex64,
    x_neg_conj: Complex64,
    re_y: f64,
}

fn inputs(me: &MatrixElements, st: &InitialState) -> Result<Inputs> {
    let mut missing = Vec::new();
    for (name, e) in [("X_AB_pos", me.x_pos), ("X_AB_neg_conj", me.x_neg_conj)] {
        if e.is_none() {
            missing.push(name.to_string());
        }
    }
    for (name, y) in [("Y_A", me.y_a), ("Y_B", me.y_b)] {
        if y.is_none() {
            missing.push(name.to_string());
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingElements(missing));
    }
    Ok(Inputs {
        alpha: st.alpha(),
        beta: st.beta(),
        phase: Complex64::from_polar(1.0, st.theta()),
        x_pos: me.x_pos.unwrap().value,
        x_neg_conj: me.x_neg_conj.unwrap().value,
        re_y: me.y_a.unwrap().re + me.y_b.unwrap().re,
    })
}

fn warn_outside(regime: Regime, st: &InitialState, me: &MatrixElements) {
    let (a, b) = (st.alpha(), st.beta());
    let x = [me.x_pos, me.x_neg_conj]
        .iter()
        .flatten()
        .map(|e| e.value.norm())
        .fold(0.0, f64::max);
    let outside = match regime {
        Regime::WeakAlpha0 => a > Regime::ALPHA_THRESHOLD,
        Regime::WeakBeta0 => b > Regime::BETA_THRESHOLD,
        Regime::Sufficient => a * b < Regime::SUFFICIENT_FACTOR * x,
        _ => false,
    };
    if outside {
        log::warn!("alpha = {a:e}, beta = {b:e} is outside the validity window of {}", regime.name());
    }
}

/// Expansion of `|r14|^2` around `alpha = 0`.
pub fn r14sq_weak_alpha0(me: &MatrixElements, st: &InitialState) -> Result<R14Parts<f64>> {
    warn_outside(Regime::WeakAlpha0, st, me);
    let v = inputs(me, st)?;
    let a = v.alpha;
    Ok(R14Parts {
        initial: a * a * (1.0 - a * a),
        neutral: 2.0 * a * (v.x_pos * v.phase).re,
        harvesting: v.x_pos.norm_sqr(),
        degradation: 2.0 * a * a * v.re_y,
    })
}

/// Expansion of `|r14|^2` around `beta = 0`.
pub fn r14sq_weak_beta0(me: &MatrixElements, st: &InitialState) -> Result<R14Parts<f64>> {
    warn_outside(Regime::WeakBeta0, st, me);
    let v = inputs(me, st)?;
    let b = v.beta;
    Ok(R14Parts {
        initial: b * b * (1.0 - b * b),
        neutral: 2.0 * b * (v.x_neg_conj * v.phase).re,
        harvesting: v.x_neg_conj.norm_sqr(),
        degradation: 2.0 * b * b * v.re_y,
    })
}

/// `|r14|^2` truncated at second order. The terms linear in `X` are
/// counted as neutral; there is no `|X|^2` harvesting term at this order.
pub fn r14sq_sufficient(me: &MatrixElements, st: &InitialState) -> Result<R14Parts<f64>> {
    warn_outside(Regime::Sufficient, st, me);
    let v = inputs(me, st)?;
    let (a, b) = (v.alpha, v.beta);
    let ab = a * b;
    Ok(R14Parts {
        initial: ab * ab,
        neutral: 2.0 * ab * (a * a * (v.x_neg_conj * v.phase).re + b * b * (v.x_pos * v.phase).re),
        harvesting: 0.0,
        degradation: 2.0 * ab * ab * v.re_y,
    })
}

/// Decomposition of the full `|r14|^2`: `|alpha^2 X(-Omega)^* + beta^2
/// X(Omega)|^2` is harvesting, `2 alpha^2 beta^2 Re[Y]` is degradation
/// and everything else is neutral.
fn exact_parts(me: &MatrixElements, st: &InitialState, r14: Complex64) -> Result<R14Parts<f64>> {
    let v = inputs(me, st)?;
    let (a, b) = (v.alpha, v.beta);
    let ab = a * b;
    let initial = ab * ab;
    let harvesting = (a * a * v.x_neg_conj + b * b * v.x_pos).norm_sqr();
    let degradation = 2.0 * ab * ab * v.re_y;
    Ok(R14Parts {
        initial,
        neutral: r14.norm_sqr() - initial - harvesting - degradation,
        harvesting,
        degradation,
    })
}

/// Concurrence of the full density matrix. Needs `r14`, hence `Im[Y]`.
pub fn concurrence_exact(dm: &DensityMatrix<f64>, me: &MatrixElements, st: &InitialState) -> Result<ConcurrenceReport> {
    let r14 = dm
        .r14
        .ok_or_else(|| Error::Divergent("r14 needs Im[Y], which is undefined for pointlike detectors".into()))?;
    let parts = exact_parts(me, st, r14)?;
    Ok(finish(Regime::ExactSmeared, st, parts, dm))
}

fn finish(regime: Regime, st: &InitialState, parts: R14Parts<f64>, dm: &DensityMatrix<f64>) -> ConcurrenceReport {
    let c_initial = initial_concurrence(st);
    let c_final = x_state_concurrence(parts.total(), dm.r22, dm.r33);
    ConcurrenceReport {
        c_initial,
        c_final,
        delta: c_final - c_initial,
        regime,
        parts,
        r22r33_sqrt: r22r33_sqrt(dm.r22, dm.r33),
        r23_margin: dm.r23_margin(),
    }
}

/// Report for precomputed elements; lets a sweep over the state reuse one
/// set of elements. `Auto` is resolved from the state and `coupling`.
pub fn report(me: &MatrixElements, st: &InitialState, regime: Regime, coupling: f64) -> Result<ConcurrenceReport> {
    let regime = match regime {
        Regime::Auto => Regime::select(st, coupling)?,
        r => r,
    };
    let dm = assemble(st, me)?;
    let parts = match regime {
        Regime::WeakAlpha0 => r14sq_weak_alpha0(me, st)?,
        Regime::WeakBeta0 => r14sq_weak_beta0(me, st)?,
        Regime::Sufficient => r14sq_sufficient(me, st)?,
        Regime::ExactSmeared => return concurrence_exact(&dm, me, st),
        Regime::Auto => unreachable!("resolved above"),
    };
    Ok(finish(regime, st, parts, &dm))
}

/// Computes the elements of a scenario and its concurrence report.
pub fn evaluate(s: &Scenario, cfg: &ElementConfig, cache: Option<&ElementCache>) -> Result<ConcurrenceReport> {
    let regime = s.validate()?;
    let me = elements::compute(s, cfg, cache)?;
    report(&me, &s.initial, regime, s.coupling())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::{DetectorParams, Spacetime};
    use crate::elements::{Estimate, YTerm};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn zero_elements() -> MatrixElements {
        let z = Some(Estimate::real(0.0));
        let y = Some(YTerm { re: 0.0, im: Some(0.0), abs_error: 0.0 });
        MatrixElements {
            i_aa_mp: z,
            i_bb_mp: z,
            i_aa_pm: z,
            i_bb_pm: z,
            i_ab_pp: z,
            i_ab_mm: z,
            i_ab_mp: z,
            i_ba_pm: z,
            i_aa_mm: z,
            i_bb_pp: z,
            y_a: y,
            y_b: y,
            x_pos: z,
            x_neg_conj: z,
        }
    }

    fn minkowski(l: f64, gap: f64, sigma: f64, st: InitialState, regime: Regime) -> Scenario {
        Scenario {
            detector_a: DetectorParams::pointlike(0.1, gap, 0.0, 0.0).with_smearing(sigma),
            detector_b: DetectorParams::pointlike(0.1, gap, 0.0, l).with_smearing(sigma),
            initial: st,
            spacetime: Spacetime::Minkowski,
            regime,
        }
    }

    #[test]
    fn untouched_states() {
        let me = zero_elements();
        let bell = InitialState::bell(0.0).unwrap();
        let r = report(&me, &bell, Regime::ExactSmeared, 0.1).unwrap();
        assert!((r.c_final - 1.0).abs() < 1e-15);
        for alpha in [0.0, 1.0] {
            let st = InitialState::from_alpha(alpha, 0.0).unwrap();
            let r = report(&me, &st, Regime::ExactSmeared, 0.1).unwrap();
            assert_eq!(r.c_final, 0.0);
        }
    }

    #[test]
    fn harvesting_only_at_beta_zero() {
        let mut me = zero_elements();
        me.x_neg_conj = Some(Estimate::exact(Complex64::new(3e-3, -4e-3)));
        me.x_pos = Some(Estimate::exact(Complex64::new(1.0, 1.0)));
        let st = InitialState::from_beta(0.0, 0.0).unwrap();
        let p = r14sq_weak_beta0(&me, &st).unwrap();
        assert_eq!(p.total().sqrt(), 5e-3);
        assert_eq!((p.initial, p.neutral, p.degradation), (0.0, 0.0, 0.0));
        let st = InitialState::from_alpha(0.0, 0.0).unwrap();
        let p = r14sq_weak_alpha0(&me, &st).unwrap();
        assert_eq!(p.harvesting, 2.0);
    }

    #[test]
    fn weak_forms_mirror_each_other() {
        // exchanging alpha and beta maps X_AB(-Omega)^* onto X_AB(Omega)
        let mut me = zero_elements();
        me.x_pos = Some(Estimate::exact(Complex64::new(2e-3, 1e-3)));
        me.x_neg_conj = Some(Estimate::exact(Complex64::new(-1e-3, 5e-4)));
        me.y_a = Some(YTerm { re: -0.01, im: None, abs_error: 0.0 });
        me.y_b = Some(YTerm { re: -0.02, im: None, abs_error: 0.0 });
        let a = r14sq_weak_alpha0(&me, &InitialState::from_alpha(3e-3, 0.7).unwrap()).unwrap();
        let swapped = MatrixElements { x_pos: me.x_neg_conj, x_neg_conj: me.x_pos, ..me };
        let b = r14sq_weak_beta0(&swapped, &InitialState::from_beta(3e-3, 0.7).unwrap()).unwrap();
        for (x, y) in [(a.initial, b.initial), (a.neutral, b.neutral), (a.harvesting, b.harvesting), (a.degradation, b.degradation)] {
            assert!((x - y).abs() <= 1e-15 * x.abs().max(1e-300), "{x} {y}");
        }
    }

    #[test]
    fn sufficient_matches_direct_arithmetic() {
        let mut me = zero_elements();
        let (xp, xn) = (Complex64::new(2e-3, 1e-3), Complex64::new(-1e-3, 5e-4));
        let y = Complex64::new(-0.03, 0.2);
        me.x_pos = Some(Estimate::exact(xp));
        me.x_neg_conj = Some(Estimate::exact(xn));
        me.y_a = Some(YTerm { re: y.re, im: Some(y.im), abs_error: 0.0 });
        me.y_b = Some(YTerm { re: 0.0, im: Some(0.0), abs_error: 0.0 });
        let (a, th) = (FRAC_1_SQRT_2, 0.4);
        let st = InitialState::from_alpha(a, th).unwrap();
        let b = st.beta();
        let e = Complex64::from_polar(1.0, -th);
        let r0 = a * b * e;
        let r2 = a * b * e * y + a * a * xn + b * b * xp;
        let direct = r0.norm_sqr() + 2.0 * (r0 * r2.conj()).re;
        let p = r14sq_sufficient(&me, &st).unwrap();
        assert!((p.total() - direct).abs() < 1e-15);
        assert_eq!(p.harvesting, 0.0);
    }

    #[test]
    fn theta_shift_flips_only_the_neutral_part() {
        let s = minkowski(7.0, 7.0, 0.0, InitialState::from_beta(1e-12, 0.0).unwrap(), Regime::WeakBeta0);
        let me = elements::compute(&s, &ElementConfig::default(), None).unwrap();
        let p0 = r14sq_weak_beta0(&me, &s.initial).unwrap();
        let p1 = r14sq_weak_beta0(&me, &InitialState::from_beta(1e-12, PI).unwrap()).unwrap();
        assert!((p0.neutral + p1.neutral).abs() <= 1e-12 * p0.neutral.abs());
        assert_eq!(p0.harvesting, p1.harvesting);
        assert_eq!(p0.degradation, p1.degradation);
        assert!(p0.degradation <= 0.0 && p0.harvesting >= 0.0);
    }

    #[test]
    fn harvesting_near_origin_of_the_gap_separation_plane() {
        let s = minkowski(1.0, 5.0, 0.0, InitialState::from_beta(0.0, 0.0).unwrap(), Regime::Auto);
        let r = evaluate(&s, &ElementConfig::default(), None).unwrap();
        assert_eq!(r.regime, Regime::WeakBeta0);
        assert_eq!(r.c_initial, 0.0);
        assert!(r.delta > 0.0, "{r:?}");
    }

    #[test]
    fn no_gain_at_small_gap_and_large_separation() {
        for beta in [1e-15, 1e-8, 1e-3] {
            let s = minkowski(7.0, 2.0, 0.0, InitialState::from_beta(beta, 0.0).unwrap(), Regime::Auto);
            let r = evaluate(&s, &ElementConfig::default(), None).unwrap();
            assert!(r.delta <= 0.0, "beta {beta}: {r:?}");
        }
        let s = minkowski(7.0, 2.0, 0.0, InitialState::bell(0.0).unwrap(), Regime::Auto);
        let r = evaluate(&s, &ElementConfig::default(), None).unwrap();
        assert_eq!(r.regime, Regime::Sufficient);
        assert!(r.c_final < 1.0 && r.delta < 0.0);
    }

    #[test]
    fn entanglement_dies_as_beta_grows_at_large_gap() {
        let s = minkowski(7.0, 7.0, 0.0, InitialState::from_beta(0.0, 0.0).unwrap(), Regime::WeakBeta0);
        let me = elements::compute(&s, &ElementConfig::default(), None).unwrap();
        let eval = |lb: f64| {
            let st = InitialState::from_log10_beta(lb, 0.0).unwrap();
            report(&me, &st, Regime::WeakBeta0, 0.1).unwrap()
        };
        assert!(eval(-30.0).delta > 0.0);
        let r = eval(-2.0);
        assert!(r.c_final < r.c_initial);
    }

    #[test]
    fn exact_and_weak_beta_agree_with_smearing() {
        let beta = 1e-3;
        let st = InitialState::from_beta(beta, 0.0).unwrap();
        let s = minkowski(3.0, 2.0, 1.0, st, Regime::ExactSmeared);
        let me = elements::compute(&s, &ElementConfig::default(), None).unwrap();
        let exact = report(&me, &st, Regime::ExactSmeared, 0.1).unwrap();
        let weak = report(&me, &st, Regime::WeakBeta0, 0.1).unwrap();
        let rel = (exact.c_final - weak.c_final).abs() / exact.c_final;
        assert!(rel < 5.0 * 0.01 * beta, "{rel:e}");
        assert!(exact.parts.degradation <= 0.0 && exact.parts.harvesting >= 0.0);
        assert!(exact.r23_margin >= -1e-12);
    }

    #[test]
    fn pointlike_exact_is_rejected() {
        let s = minkowski(3.0, 2.0, 0.0, InitialState::bell(0.0).unwrap(), Regime::ExactSmeared);
        assert!(matches!(evaluate(&s, &ElementConfig::default(), None), Err(Error::Regime(_))));
        let me = elements::compute(&s, &ElementConfig::default(), None).unwrap();
        let dm = assemble(&s.initial, &me).unwrap();
        assert!(dm.concurrence().is_none());
    }

    #[test]
    fn rounding_residues_are_clamped() {
        assert_eq!(r22r33_sqrt(-1e-16, 0.5), 0.0);
        assert_eq!(x_state_concurrence(0.25, -1e-16, 0.5), 1.0);
        assert_eq!(x_state_concurrence(0.01f32, 0.1, 0.1), 0.0);
    }
}
