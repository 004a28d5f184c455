//! The X-shaped two-qubit density matrix in the basis
//! `|g g>, |g e>, |e g>, |e e>`.

use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};

use super::MatrixElements;
use crate::detector::InitialState;
use crate::error::{Error, Result};
use crate::Real;

/// The six independent entries of the second-order density matrix.
///
/// `r14` is absent when it would need the imaginary part of `Y` and that
/// part is unavailable (pointlike detectors).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix<R> {
    pub r11: R,
    pub r22: R,
    pub r33: R,
    pub r44: R,
    pub r14: Option<Complex<R>>,
    pub r23: Complex<R>,
}

impl<R: Real> DensityMatrix<R> {
    pub fn trace(&self) -> R {
        self.r11 + self.r22 + self.r33 + self.r44
    }

    /// `r11 r44 - |r23|^2`; negative values would signal entanglement
    /// through the other anti-diagonal.
    pub fn r23_margin(&self) -> R {
        self.r11 * self.r44 - self.r23.norm_sqr()
    }
}

/// Builds the density matrix of a scenario from its matrix elements.
pub fn assemble(state: &InitialState, me: &MatrixElements) -> Result<DensityMatrix<f64>> {
    let missing = me.missing_for_density();
    if !missing.is_empty() {
        return Err(Error::MissingElements(missing));
    }
    let v = |e: &Option<super::Estimate>| e.expect("checked above").value;
    let (a, b) = (state.alpha(), state.beta());
    let ab = a * b;
    let phase = Complex64::from_polar(1.0, state.theta());
    let (aa_mp, bb_mp) = (v(&me.i_aa_mp).re, v(&me.i_bb_mp).re);
    let (aa_pm, bb_pm) = (v(&me.i_aa_pm).re, v(&me.i_bb_pm).re);
    let (x_pos, x_neg) = (v(&me.x_pos), v(&me.x_neg_conj));

    let r11 = a * a * (1.0 - aa_mp - bb_mp) + 2.0 * ab * (phase * x_pos).re;
    let r44 = b * b * (1.0 - aa_pm - bb_pm) + 2.0 * ab * (phase * x_neg).re;
    let r22 = b * b * aa_pm + 2.0 * ab * (phase.conj() * v(&me.i_ab_pp)).re + a * a * bb_mp;
    let r33 = a * a * aa_mp + 2.0 * ab * (phase * v(&me.i_ab_mm)).re + b * b * bb_pm;
    let r23 = ab * phase * v(&me.i_aa_mm)
        + b * b * v(&me.i_ba_pm)
        + a * a * v(&me.i_ab_mp)
        + ab * phase.conj() * v(&me.i_bb_pp);

    let ya = me.y_a.expect("checked above");
    let yb = me.y_b.expect("checked above");
    let y = match (ya.im, yb.im) {
        (Some(ia), Some(ib)) => Some(Complex64::new(ya.re + yb.re, ia + ib)),
        _ if ab == 0.0 => Some(Complex64::new(ya.re + yb.re, 0.0)),
        _ => None,
    };
    let r14 = y.map(|y| ab * phase.conj() * (1.0 + y) + a * a * x_neg + b * b * x_pos);

    Ok(DensityMatrix { r11, r22, r33, r44, r14, r23 })
}
