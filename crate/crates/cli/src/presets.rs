//! Grids reproducing the published figure datasets.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::config::{Entry, KeyMap};
use crate::sweep::{Axis, SweepSpec};

pub const NAMES: [&str; 7] = ["fig1b", "fig2a", "fig2bc", "fig3", "fig5ai", "fig5aii", "fig5b"];

const GRID_2D: usize = 201;
const GRID_1D: usize = 401;

fn fixed(pairs: &[(&str, String)]) -> KeyMap {
    pairs
        .iter()
        .map(|(k, v)| {
            let entry = Entry {
                value: v.clone(),
                line: 0,
            };
            (k.to_string(), entry)
        })
        .collect()
}

/// The preset called `name`. `steps` replaces the resolution of every
/// continuous axis; two-valued axes (`theta`, `aT`) keep their two values.
pub fn preset(name: &str, steps: Option<usize>) -> Option<SweepSpec> {
    let s = |v: f64| format!("{v:e}");
    let (fixed, axis1, axis2) = match name {
        "fig1b" => (
            fixed(&[("OmegaT", s(5.0)), ("beta", s(1e-15))]),
            Axis::new("dt_over_T", -10.0, 10.0, GRID_2D),
            Some(Axis::new("L_over_T", 0.0, 10.0, GRID_2D)),
        ),
        "fig2a" => (
            fixed(&[("L_over_T", s(7.0)), ("regime", "weak_beta0".into())]),
            Axis::new("OmegaT", 0.0, 15.0, GRID_2D),
            Some(Axis::new("log10_beta", -40.0, 0.0, GRID_2D)),
        ),
        "fig2bc" => (
            fixed(&[("OmegaT", s(7.0)), ("L_over_T", s(7.0)), ("regime", "weak_beta0".into())]),
            Axis::new("theta", 0.0, PI, 2),
            Some(Axis::new("log10_beta", -25.0, 0.0, GRID_1D)),
        ),
        "fig3" => (
            fixed(&[("beta", s(1e-15))]),
            Axis::new("L_over_T", 0.0, 10.0, GRID_2D),
            Some(Axis::new("OmegaT", 0.0, 10.0, GRID_2D)),
        ),
        "fig5ai" => (
            fixed(&[("OmegaT", s(2.0)), ("zB_over_T", s(7.0)), ("aT", s(1.0)), ("beta", s(1e-5))]),
            Axis::new("zA_over_T", -4.0, 8.0, GRID_1D),
            None,
        ),
        "fig5aii" => (
            fixed(&[
                ("OmegaT", s(2.0)),
                ("zA_over_T", s(-0.5)),
                ("zB_over_T", s(7.0)),
                ("aT", s(1.0)),
                ("regime", "weak_beta0".into()),
            ]),
            Axis::new("log10_beta", -8.0, -1.0, GRID_1D),
            None,
        ),
        "fig5b" => (
            fixed(&[
                ("OmegaT", s(2.0)),
                ("zB_over_T", s(7.0)),
                ("spacetime", "shockwave".into()),
                ("alpha", s(FRAC_1_SQRT_2)),
                ("regime", "sufficient".into()),
            ]),
            Axis::new("aT", 0.0, 1.0, 2),
            Some(Axis::new("zA_over_T", -4.0, 8.0, GRID_1D)),
        ),
        _ => return None,
    };
    let resize = |mut a: Axis| {
        if let Some(n) = steps.filter(|_| a.steps > 2) {
            a.steps = n;
        }
        a
    };
    Some(SweepSpec {
        fixed,
        axis1: resize(axis1),
        axis2: axis2.map(resize),
    })
}
