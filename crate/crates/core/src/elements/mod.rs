//! Second-order matrix elements and the reduced density matrix.
//!
//! Minkowski elements come from the closed forms in [`closed`]. Shockwave
//! elements are the pointlike Minkowski values plus the integral of the
//! kernel difference over the region where the two events straddle the
//! wavefront, see [`generic::shock_correction`].

pub mod cache;
pub mod closed;
pub mod density;
pub mod generic;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::detector::{DetectorParams, Scenario, Spacetime};
use crate::error::Result;
use crate::wightman::Shockwave;
use cache::OnceMap;
use closed::*;
use generic::{shock_correction, GenericConfig};

pub use density::{assemble, DensityMatrix};

/// A complex value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex64,
    pub abs_error: f64,
}

impl Estimate {
    pub fn new(value: Complex64, abs_error: f64) -> Self {
        Estimate { value, abs_error }
    }

    /// A closed-form value, exact up to rounding.
    pub fn exact(value: Complex64) -> Self {
        Estimate { value, abs_error: 0.0 }
    }

    pub fn real(value: f64) -> Self {
        Estimate::exact(Complex64::new(value, 0.0))
    }

    pub fn conj(self) -> Self {
        Estimate::new(self.value.conj(), self.abs_error)
    }

    pub fn add(self, other: Estimate) -> Self {
        Estimate::new(self.value + other.value, self.abs_error + other.abs_error)
    }
}

/// `lambda^2 Y_k`. The imaginary part is absent for pointlike detectors,
/// where it diverges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YTerm {
    pub re: f64,
    pub im: Option<f64>,
    pub abs_error: f64,
}

/// Every second-order ingredient of the density matrix, coupling
/// constants included. `x_pos` is `lambda^2 X_AB(Omega)` and `x_neg_conj`
/// is `lambda^2 X_AB(-Omega)^*`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MatrixElements {
    pub i_aa_mp: Option<Estimate>,
    pub i_bb_mp: Option<Estimate>,
    pub i_aa_pm: Option<Estimate>,
    pub i_bb_pm: Option<Estimate>,
    pub i_ab_pp: Option<Estimate>,
    pub i_ab_mm: Option<Estimate>,
    pub i_ab_mp: Option<Estimate>,
    pub i_ba_pm: Option<Estimate>,
    pub i_aa_mm: Option<Estimate>,
    pub i_bb_pp: Option<Estimate>,
    pub y_a: Option<YTerm>,
    pub y_b: Option<YTerm>,
    pub x_pos: Option<Estimate>,
    pub x_neg_conj: Option<Estimate>,
}

impl MatrixElements {
    /// Named complex entries, in a fixed order.
    pub fn entries(&self) -> [(&'static str, Option<Estimate>); 12] {
        [
            ("I_AA_mp", self.i_aa_mp),
            ("I_BB_mp", self.i_bb_mp),
            ("I_AA_pm", self.i_aa_pm),
            ("I_BB_pm", self.i_bb_pm),
            ("I_AB_pp", self.i_ab_pp),
            ("I_AB_mm", self.i_ab_mm),
            ("I_AB_mp", self.i_ab_mp),
            ("I_BA_pm", self.i_ba_pm),
            ("I_AA_mm", self.i_aa_mm),
            ("I_BB_pp", self.i_bb_pp),
            ("X_AB_pos", self.x_pos),
            ("X_AB_neg_conj", self.x_neg_conj),
        ]
    }

    /// Names of the entries the density matrix needs but that are absent.
    pub fn missing_for_density(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .entries()
            .iter()
            .filter(|(_, e)| e.is_none())
            .map(|(n, _)| n.to_string())
            .collect();
        for (name, y) in [("Y_A", self.y_a), ("Y_B", self.y_b)] {
            if y.is_none() {
                out.push(name.into());
            }
        }
        out
    }
}

/// Accuracy settings for the element evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementConfig {
    /// Relative tolerance of the one-dimensional momentum integrals.
    pub k_tol: f64,
    /// Settings of the double integrals (shockwave corrections).
    pub generic: GenericConfig,
}

impl Default for ElementConfig {
    fn default() -> Self {
        ElementConfig {
            k_tol: 1e-10,
            generic: GenericConfig::default(),
        }
    }
}

/// Elements of one detector alone.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Local {
    i_mp: Estimate,
    i_pm: Estimate,
    i_mm: Estimate,
    y: YTerm,
}

/// Elements coupling the two detectors.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Pair {
    i_ab_pp: Estimate,
    i_ab_mm: Estimate,
    i_ab_mp: Estimate,
    i_ba_pm: Estimate,
    x_pos: Estimate,
    x_neg_conj: Estimate,
}

/// Memoised elements, safe to share between threads. Detector-local
/// quantities are keyed by one detector so they are reused across every
/// scenario that contains it.
#[derive(Debug, Default)]
pub struct ElementCache {
    local: OnceMap<String, Local>,
    pair: OnceMap<String, Pair>,
}

impl ElementCache {
    pub fn new() -> Self {
        ElementCache::default()
    }

    /// Number of stored (local, pair) entries.
    pub fn sizes(&self) -> (usize, usize) {
        (self.local.len(), self.pair.len())
    }
}

/// Computes all matrix elements of a scenario.
pub fn compute(s: &Scenario, cfg: &ElementConfig, cache: Option<&ElementCache>) -> Result<MatrixElements> {
    s.check()?;
    let (a, b) = (&s.detector_a, &s.detector_b);
    let local = |d: &DetectorParams| match cache {
        Some(c) => c.local.get_or_try_insert(format!("{d:?}{:?}{cfg:?}", s.spacetime), || local(d, &s.spacetime, cfg)),
        None => local(d, &s.spacetime, cfg),
    };
    let la = local(a)?;
    let lb = local(b)?;
    let p = match cache {
        Some(c) => c
            .pair
            .get_or_try_insert(format!("{a:?}{b:?}{:?}{cfg:?}", s.spacetime), || pair(a, b, &s.spacetime, cfg))?,
        None => pair(a, b, &s.spacetime, cfg)?,
    };
    Ok(MatrixElements {
        i_aa_mp: Some(la.i_mp),
        i_bb_mp: Some(lb.i_mp),
        i_aa_pm: Some(la.i_pm),
        i_bb_pm: Some(lb.i_pm),
        i_ab_pp: Some(p.i_ab_pp),
        i_ab_mm: Some(p.i_ab_mm),
        i_ab_mp: Some(p.i_ab_mp),
        i_ba_pm: Some(p.i_ba_pm),
        i_aa_mm: Some(la.i_mm),
        // I_kk^(++) = I_kk^(--)*
        i_bb_pp: Some(lb.i_mm.conj()),
        y_a: Some(la.y),
        y_b: Some(lb.y),
        x_pos: Some(p.x_pos),
        x_neg_conj: Some(p.x_neg_conj),
    })
}

fn local(d: &DetectorParams, spacetime: &Spacetime, cfg: &ElementConfig) -> Result<Local> {
    let mut i_mp = Estimate::real(ikk_mp_closed(d));
    let mut i_pm = Estimate::real(ikk_pm_closed(d));
    let mut i_mm = Estimate::exact(ikk_mm_closed(d));
    match spacetime {
        Spacetime::Minkowski => {
            let y = if d.smearing > 0.0 {
                let y = y_closed(d, cfg.k_tol)?;
                YTerm { re: y.value.re, im: Some(y.value.im), abs_error: y.abs_error }
            } else {
                YTerm { re: y_re_closed(d), im: None, abs_error: 0.0 }
            };
            Ok(Local { i_mp, i_pm, i_mm, y })
        }
        Spacetime::Shockwave(params) => {
            let shock = Shockwave { params: *params };
            let g = &cfg.generic;
            i_mp = i_mp.add(shock_correction(d, d, (-1, 1), false, &shock, g)?);
            i_pm = i_pm.add(shock_correction(d, d, (1, -1), false, &shock, g)?);
            i_mm = i_mm.add(shock_correction(d, d, (-1, -1), false, &shock, g)?);
            // J + J* = -I holds for any Hermitian two-point function
            let y = YTerm {
                re: -0.5 * (i_mp.value.re + i_pm.value.re),
                im: None,
                abs_error: 0.5 * (i_mp.abs_error + i_pm.abs_error),
            };
            Ok(Local { i_mp, i_pm, i_mm, y })
        }
    }
}

fn pair(a: &DetectorParams, b: &DetectorParams, spacetime: &Spacetime, cfg: &ElementConfig) -> Result<Pair> {
    let kt = cfg.k_tol;
    let mut i_ab_pp = Estimate::exact(ijk_pp_closed(a, b)?);
    let mut i_ab_mm = Estimate::exact(ijk_mm_closed(a, b)?);
    let mut i_ab_mp = ijk_momentum(a, b, (-1, 1), kt)?;
    let mut i_ba_pm = ijk_momentum(b, a, (1, -1), kt)?;
    let mut j_ab_mm = jjk_mm_closed(a, b, kt)?;
    let mut j_ba_mm = jjk_mm_closed(b, a, kt)?;
    let mut j_ab_pp = jjk_pp_closed(a, b, kt)?;
    let mut j_ba_pp = jjk_pp_closed(b, a, kt)?;
    if let Spacetime::Shockwave(params) = spacetime {
        let shock = Shockwave { params: *params };
        let g = &cfg.generic;
        let corr = |j, k, signs, ordered| shock_correction(j, k, signs, ordered, &shock, g);
        i_ab_pp = i_ab_pp.add(corr(a, b, (1, 1), false)?);
        i_ab_mm = i_ab_mm.add(corr(a, b, (-1, -1), false)?);
        i_ab_mp = i_ab_mp.add(corr(a, b, (-1, 1), false)?);
        i_ba_pm = i_ba_pm.add(corr(b, a, (1, -1), false)?);
        j_ab_mm = j_ab_mm.add(corr(a, b, (-1, -1), true)?);
        j_ba_mm = j_ba_mm.add(corr(b, a, (-1, -1), true)?);
        j_ab_pp = j_ab_pp.add(corr(a, b, (1, 1), true)?);
        j_ba_pp = j_ba_pp.add(corr(b, a, (1, 1), true)?);
    }
    Ok(Pair {
        i_ab_pp,
        i_ab_mm,
        i_ab_mp,
        i_ba_pm,
        x_pos: j_ab_mm.add(j_ba_mm),
        x_neg_conj: j_ab_pp.add(j_ba_pp).conj(),
    })
}
