//! Parameter sweeps over one or two axes, written as CSV.

use std::io::Write;

use rayon::prelude::*;
use udw_core::{evaluate, ConcurrenceReport, ElementCache, ElementConfig, Error};

use crate::config::{ConfigError, Entry, KeyMap, Params};

/// Parameters a sweep may vary.
pub const AXIS_NAMES: [&str; 7] = ["L_over_T", "dt_over_T", "OmegaT", "log10_beta", "zA_over_T", "aT", "theta"];

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(name: &str, min: f64, max: f64, steps: usize) -> Axis {
        Axis {
            name: name.to_string(),
            min,
            max,
            steps,
        }
    }

    /// Parses `name min max steps`.
    pub fn parse(text: &str) -> Result<Axis, String> {
        let parts: Vec<&str> = text.split_whitespace().collect();
        let [name, min, max, steps] = parts.as_slice() else {
            return Err(format!("expected `name min max steps`, found `{text}`"));
        };
        let num = |s: &str| s.parse::<f64>().ok().filter(|x| x.is_finite());
        let (Some(min), Some(max)) = (num(min), num(max)) else {
            return Err(format!("bounds of `{name}` are not finite numbers"));
        };
        let steps = steps
            .parse::<usize>()
            .map_err(|_| format!("step count `{steps}` of `{name}` is not a positive integer"))?;
        Ok(Axis::new(name, min, max, steps))
    }

    /// The `i`-th grid value; both ends are hit exactly.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
    }
}

/// A sweep: fixed keys plus one or two axes. The first axis varies slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub fixed: KeyMap,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
}

impl SweepSpec {
    /// Splits a parsed sweep file into axes and fixed scenario keys.
    pub fn from_map(mut map: KeyMap) -> Result<SweepSpec, ConfigError> {
        let mut axis = |key: &str| -> Result<Option<Axis>, ConfigError> {
            map.remove(key)
                .map(|e| {
                    Axis::parse(&e.value).map_err(|m| ConfigError {
                        line: Some(e.line),
                        field: Some(key.into()),
                        message: m,
                    })
                })
                .transpose()
        };
        let axis1 = axis("axis1")?.ok_or_else(|| ConfigError::field("axis1", "missing required field"))?;
        let axis2 = axis("axis2")?;
        let spec = SweepSpec { fixed: map, axis1, axis2 };
        spec.check()?;
        Ok(spec)
    }

    pub fn axes(&self) -> Vec<&Axis> {
        std::iter::once(&self.axis1).chain(self.axis2.as_ref()).collect()
    }

    /// Checks the axes and resolves the first grid point, so that a
    /// misconfigured sweep fails before any work is done.
    pub fn check(&self) -> Result<(), ConfigError> {
        let axes = self.axes();
        for (i, a) in axes.iter().enumerate() {
            let key = format!("axis{}", i + 1);
            if !AXIS_NAMES.contains(&a.name.as_str()) {
                return Err(ConfigError::field(
                    &key,
                    format!("`{}` cannot be swept; use one of {}", a.name, AXIS_NAMES.join(", ")),
                ));
            }
            if a.steps < 2 {
                return Err(ConfigError::field(&key, "needs at least 2 steps"));
            }
            if self.fixed.contains_key(&a.name) {
                return Err(ConfigError::field(&a.name, "is both swept and fixed"));
            }
        }
        if axes.len() == 2 && axes[0].name == axes[1].name {
            return Err(ConfigError::field("axis2", "sweeps the same parameter as axis1"));
        }
        let state_keys = ["alpha", "beta"];
        if axes.iter().any(|a| a.name == "log10_beta") {
            if let Some(k) = state_keys.iter().find(|k| self.fixed.contains_key(**k)) {
                return Err(ConfigError::field(k, "conflicts with the log10_beta axis"));
            }
        }
        if axes.iter().any(|a| a.name == "L_over_T") && self.fixed.contains_key("zB_over_T") {
            return Err(ConfigError::field("zB_over_T", "conflicts with the L_over_T axis"));
        }
        self.params(0).map(|_| ())
    }

    pub fn len(&self) -> usize {
        self.axes().iter().map(|a| a.steps).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis indices of grid point `k`.
    pub fn indices(&self, k: usize) -> (usize, Option<usize>) {
        match &self.axis2 {
            None => (k, None),
            Some(a2) => (k / a2.steps, Some(k % a2.steps)),
        }
    }

    /// Parameters of grid point `k`.
    pub fn params(&self, k: usize) -> Result<Params, ConfigError> {
        let (i, j) = self.indices(k);
        let mut map = self.fixed.clone();
        let mut set = |a: &Axis, i: usize| {
            let entry = Entry {
                value: format!("{:e}", a.value(i)),
                line: 0,
            };
            map.insert(a.name.clone(), entry);
        };
        set(&self.axis1, i);
        if let (Some(a2), Some(j)) = (&self.axis2, j) {
            set(a2, j);
        }
        Params::from_map(&map)
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub params: Params,
    pub outcome: Result<ConcurrenceReport, Error>,
}

/// Short status token for the CSV.
pub fn status(outcome: &Result<ConcurrenceReport, Error>) -> &'static str {
    match outcome {
        Ok(_) => "ok",
        Err(e) => match e {
            Error::Domain(_) => "domain",
            Error::Overflow(_) => "overflow",
            Error::NonConvergence { .. } => "nonconvergence",
            Error::Divergent(_) => "divergent",
            Error::Extrapolation { .. } => "extrapolation",
            Error::SingularKernel { .. } => "singular",
            Error::Mismatch(_) => "mismatch",
            Error::DegenerateSeparation(_) => "degenerate",
            Error::MissingElements(_) => "missing",
            Error::Regime(_) => "regime",
            Error::InvalidParameter(_) => "invalid",
        },
    }
}

/// Evaluates every grid point on `workers` threads. Rows come back in
/// grid order whatever the thread count.
pub fn run(spec: &SweepSpec, cfg: &ElementConfig, workers: usize) -> Result<Vec<Row>, ConfigError> {
    let params = (0..spec.len()).map(|k| spec.params(k)).collect::<Result<Vec<_>, _>>()?;
    let cache = ElementCache::new();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| ConfigError {
            line: None,
            field: None,
            message: format!("cannot start worker pool: {e}"),
        })?;
    let rows = pool.install(|| {
        params
            .par_iter()
            .map(|p| Row {
                params: *p,
                outcome: p.scenario().and_then(|s| evaluate(&s, cfg, Some(&cache))),
            })
            .collect()
    });
    Ok(rows)
}

pub const COLUMNS: [&str; 24] = [
    "index",
    "OmegaT",
    "L_over_T",
    "dt_over_T",
    "sigma_over_T",
    "zA_over_T",
    "zB_over_T",
    "lambda_A",
    "lambda_B",
    "beta",
    "log10_beta",
    "theta",
    "aT",
    "regime",
    "c_initial",
    "c_final",
    "delta",
    "part_initial",
    "part_neutral",
    "part_harvesting",
    "part_degradation",
    "r22r33_sqrt",
    "r23_margin",
    "status",
];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the rows as CSV with `\n` line endings.
pub fn write_csv<W: Write>(out: W, rows: &[Row]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(COLUMNS)?;
    for (k, row) in rows.iter().enumerate() {
        let p = &row.params;
        let beta = p.beta();
        let mut rec = vec![
            k.to_string(),
            num(p.omega_t),
            num((p.z_b - p.z_a).abs()),
            num(p.t_b - p.t_a),
            num(p.sigma),
            num(p.z_a),
            num(p.z_b),
            num(p.lambda_a),
            num(p.lambda_b),
            num(beta),
            num(match p.state {
                crate::config::StateSpec::Log10Beta(l) => l,
                _ => beta.log10(),
            }),
            num(p.theta),
            num(p.shock.map_or(0.0, |s| s.0)),
        ];
        match &row.outcome {
            Ok(r) => {
                rec.push(r.regime.name().into());
                for x in [
                    r.c_initial,
                    r.c_final,
                    r.delta,
                    r.parts.initial,
                    r.parts.neutral,
                    r.parts.harvesting,
                    r.parts.degradation,
                    r.r22r33_sqrt,
                    r.r23_margin,
                ] {
                    rec.push(num(x));
                }
            }
            Err(_) => {
                rec.push(p.regime.name().into());
                rec.extend(std::iter::repeat_n("nan".to_string(), 9));
            }
        }
        rec.push(status(&row.outcome).into());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
