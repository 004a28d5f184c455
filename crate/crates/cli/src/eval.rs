//! Single-point evaluation with everything echoed.

use std::fmt::Write;

use serde::Serialize;
use udw_core::{
    assemble, compute, derived_geometry, report, ConcurrenceReport, DensityMatrix, ElementConfig, Estimate,
    Geometry, MatrixElements, Result, Scenario,
};

use crate::config::Params;

#[derive(Debug, Clone, Serialize)]
pub struct EvalOutput {
    pub scenario: Scenario,
    pub geometry: Geometry,
    pub elements: MatrixElements,
    /// Absent for pointlike detectors in an entangled state, where `r14`
    /// needs the divergent `Im[Y]`.
    pub density: Option<DensityMatrix>,
    pub report: ConcurrenceReport,
}

pub fn eval_point(p: &Params, cfg: &ElementConfig) -> Result<EvalOutput> {
    let scenario = p.scenario()?;
    let regime = scenario.validate()?;
    let geometry = derived_geometry(&scenario)?;
    let elements = compute(&scenario, cfg, None)?;
    let density = assemble(&scenario.initial, &elements).ok();
    let report = report(&elements, &scenario.initial, regime, scenario.coupling())?;
    Ok(EvalOutput {
        scenario,
        geometry,
        elements,
        density,
        report,
    })
}

fn estimate(e: Option<Estimate>) -> String {
    match e {
        Some(e) => format!("{:.16e} {:.16e} {:.3e}", e.value.re, e.value.im, e.abs_error),
        None => "absent".into(),
    }
}

impl EvalOutput {
    /// `key = value` lines: geometry, elements (`re im abs_error`),
    /// density matrix and the concurrence report.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| writeln!(out, "{k} = {v}").expect("writing to a String");
        let (a, b) = (&self.scenario.detector_a, &self.scenario.detector_b);
        line("OmegaT", format!("{:.16e}", a.gap));
        line("sigma_over_T", format!("{:.16e}", a.smearing));
        line("lambda_A", format!("{:.16e}", a.coupling));
        line("lambda_B", format!("{:.16e}", b.coupling));
        line("zA_over_T", format!("{:.16e}", a.position[2]));
        line("zB_over_T", format!("{:.16e}", b.position[2]));
        line("alpha", format!("{:.16e}", self.scenario.initial.alpha()));
        line("beta", format!("{:.16e}", self.scenario.initial.beta()));
        line("theta", format!("{:.16e}", self.scenario.initial.theta()));
        line("spacetime", format!("{:?}", self.scenario.spacetime));
        let g = &self.geometry;
        line("L_over_T", format!("{:.16e}", g.l));
        line("dt_over_T", format!("{:.16e}", g.dt));
        line("Gamma_plus", format!("{:.16e}", g.gamma_plus));
        line("Gamma_minus", format!("{:.16e}", g.gamma_minus));
        for (name, e) in self.elements.entries() {
            line(name, estimate(e));
        }
        for (name, y) in [("Y_A", self.elements.y_a), ("Y_B", self.elements.y_b)] {
            let v = match y {
                Some(y) => {
                    let im = y.im.map_or("absent".to_string(), |im| format!("{im:.16e}"));
                    format!("{:.16e} {im} {:.3e}", y.re, y.abs_error)
                }
                None => "absent".into(),
            };
            line(name, v);
        }
        if let Some(d) = &self.density {
            line("r11", format!("{:.16e}", d.r11));
            line("r22", format!("{:.16e}", d.r22));
            line("r33", format!("{:.16e}", d.r33));
            line("r44", format!("{:.16e}", d.r44));
            line("r23", format!("{:.16e} {:.16e}", d.r23.re, d.r23.im));
            let r14 = d.r14.map_or("absent".to_string(), |z| format!("{:.16e} {:.16e}", z.re, z.im));
            line("r14", r14);
            line("trace", format!("{:.16e}", d.trace()));
        }
        let r = &self.report;
        line("regime", r.regime.name().into());
        line("c_initial", format!("{:.16e}", r.c_initial));
        line("c_final", format!("{:.16e}", r.c_final));
        line("delta", format!("{:.16e}", r.delta));
        line("part_initial", format!("{:.16e}", r.parts.initial));
        line("part_neutral", format!("{:.16e}", r.parts.neutral));
        line("part_harvesting", format!("{:.16e}", r.parts.harvesting));
        line("part_degradation", format!("{:.16e}", r.parts.degradation));
        line("r22r33_sqrt", format!("{:.16e}", r.r22r33_sqrt));
        line("r23_margin", format!("{:.16e}", r.r23_margin));
        out
    }
}
