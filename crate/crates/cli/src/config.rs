//! Flat `key = value` configuration files.
//!
//! One assignment per line, `#` starts a comment, all dimensional values
//! are in units of the switching width `T`.

use std::collections::BTreeMap;
use std::fmt;

use udw_core::{DetectorParams, InitialState, Regime, Scenario, ShockwaveParams, Spacetime};

/// Scenario keys understood by [`Params::from_map`].
pub const SCENARIO_KEYS: [&str; 18] = [
    "OmegaT",
    "sigma_over_T",
    "lambda",
    "lambda_A",
    "lambda_B",
    "zA_over_T",
    "zB_over_T",
    "L_over_T",
    "tA_over_T",
    "dt_over_T",
    "alpha",
    "beta",
    "log10_beta",
    "theta",
    "spacetime",
    "aT",
    "u0_over_T",
    "regime",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl ConfigError {
    pub fn field(field: &str, message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            field: Some(field.to_string()),
            message: message.into(),
        }
    }

    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            field: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.field) {
            (Some(l), Some(k)) => write!(f, "line {l}, field `{k}`: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, Some(k)) => write!(f, "field `{k}`: {}", self.message),
            (None, None) => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// A parsed value with the line it came from (0 for values set in code).
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: usize,
}

pub type KeyMap = BTreeMap<String, Entry>;

/// Splits a configuration text into key/value pairs.
pub fn parse_kv(text: &str) -> Result<KeyMap, ConfigError> {
    let mut out = KeyMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, format!("expected `key = value`, found `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::at(line, "empty key or value"));
        }
        let entry = Entry {
            value: value.to_string(),
            line,
        };
        if let Some(prev) = out.insert(key.to_string(), entry) {
            return Err(ConfigError {
                line: Some(line),
                field: Some(key.to_string()),
                message: format!("already set on line {}", prev.line),
            });
        }
    }
    Ok(out)
}

fn located(e: &Entry, field: &str, message: String) -> ConfigError {
    ConfigError {
        line: (e.line > 0).then_some(e.line),
        field: Some(field.to_string()),
        message,
    }
}

fn number(map: &KeyMap, key: &str) -> Result<Option<f64>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(e) => e
            .value
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Some)
            .ok_or_else(|| located(e, key, format!("`{}` is not a finite number", e.value))),
    }
}

fn required(map: &KeyMap, key: &str) -> Result<f64, ConfigError> {
    number(map, key)?.ok_or_else(|| ConfigError::field(key, "missing required field"))
}

/// How the initial state was specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Alpha(f64),
    Beta(f64),
    Log10Beta(f64),
}

/// Scenario parameters with defaults applied, in units of `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub omega_t: f64,
    pub sigma: f64,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub z_a: f64,
    pub z_b: f64,
    pub t_a: f64,
    pub t_b: f64,
    pub state: StateSpec,
    pub theta: f64,
    /// `Some((a T, u0 / T))` for the shockwave.
    pub shock: Option<(f64, f64)>,
    pub regime: Regime,
}

impl Params {
    /// Reads the scenario keys of `map`; other keys must have been removed.
    pub fn from_map(map: &KeyMap) -> Result<Params, ConfigError> {
        for (k, e) in map {
            if !SCENARIO_KEYS.contains(&k.as_str()) {
                return Err(located(e, k, "unknown key".into()));
            }
        }
        let omega_t = required(map, "OmegaT")?;
        let sigma = number(map, "sigma_over_T")?.unwrap_or(0.0);
        let lambda = number(map, "lambda")?.unwrap_or(0.1);
        let lambda_a = number(map, "lambda_A")?.unwrap_or(lambda);
        let lambda_b = number(map, "lambda_B")?.unwrap_or(lambda);
        let z_a = number(map, "zA_over_T")?.unwrap_or(0.0);
        let z_b = match (number(map, "zB_over_T")?, number(map, "L_over_T")?) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::field("L_over_T", "give either zB_over_T or L_over_T, not both"))
            }
            (Some(z), None) => z,
            (None, Some(l)) => z_a + l,
            (None, None) => return Err(ConfigError::field("L_over_T", "missing required field (or zB_over_T)")),
        };
        let t_a = number(map, "tA_over_T")?.unwrap_or(0.0);
        let t_b = t_a + number(map, "dt_over_T")?.unwrap_or(0.0);
        let states = [
            number(map, "alpha")?.map(StateSpec::Alpha),
            number(map, "beta")?.map(StateSpec::Beta),
            number(map, "log10_beta")?.map(StateSpec::Log10Beta),
        ];
        let mut given = states.iter().flatten();
        let state = *given
            .next()
            .ok_or_else(|| ConfigError::field("beta", "missing required field (or alpha, log10_beta)"))?;
        if given.next().is_some() {
            return Err(ConfigError::field("beta", "give exactly one of alpha, beta, log10_beta"));
        }
        let theta = number(map, "theta")?.unwrap_or(0.0);
        let a = number(map, "aT")?;
        let kind = match map.get("spacetime") {
            Some(e) => e.value.to_ascii_lowercase(),
            None if a.is_some() => "shockwave".into(),
            None => "minkowski".into(),
        };
        let shock = match kind.as_str() {
            "minkowski" => {
                if a.is_some() {
                    return Err(ConfigError::field("aT", "only meaningful with spacetime = shockwave"));
                }
                None
            }
            "shockwave" => Some((
                a.ok_or_else(|| ConfigError::field("aT", "missing required field for the shockwave"))?,
                number(map, "u0_over_T")?.unwrap_or(0.0),
            )),
            other => {
                return Err(located(
                    &map["spacetime"],
                    "spacetime",
                    format!("`{other}` is not one of minkowski, shockwave"),
                ))
            }
        };
        let regime = match map.get("regime") {
            None => Regime::Auto,
            Some(e) => Regime::parse(&e.value).ok_or_else(|| {
                located(
                    e,
                    "regime",
                    format!("`{}` is not one of auto, weak_alpha0, weak_beta0, sufficient, exact", e.value),
                )
            })?,
        };
        Ok(Params {
            omega_t,
            sigma,
            lambda_a,
            lambda_b,
            z_a,
            z_b,
            t_a,
            t_b,
            state,
            theta,
            shock,
            regime,
        })
    }

    pub fn initial_state(&self) -> udw_core::Result<InitialState> {
        match self.state {
            StateSpec::Alpha(a) => InitialState::from_alpha(a, self.theta),
            StateSpec::Beta(b) => InitialState::from_beta(b, self.theta),
            StateSpec::Log10Beta(l) => InitialState::from_log10_beta(l, self.theta),
        }
    }

    /// Builds and checks the scenario.
    pub fn scenario(&self) -> udw_core::Result<Scenario> {
        let detector = |lambda, t, z| DetectorParams::new(lambda, self.omega_t, t, 1.0, self.sigma, [0.0, 0.0, z]);
        let s = Scenario {
            detector_a: detector(self.lambda_a, self.t_a, self.z_a)?,
            detector_b: detector(self.lambda_b, self.t_b, self.z_b)?,
            initial: self.initial_state()?,
            spacetime: match self.shock {
                None => Spacetime::Minkowski,
                Some((a, u0)) => Spacetime::Shockwave(ShockwaveParams { a, u0 }),
            },
            regime: self.regime,
        };
        s.check()?;
        Ok(s)
    }

    /// `beta` as a plain number, whichever way it was given.
    pub fn beta(&self) -> f64 {
        match self.state {
            StateSpec::Alpha(a) => (1.0 - a * a).max(0.0).sqrt(),
            StateSpec::Beta(b) => b,
            StateSpec::Log10Beta(l) => 10f64.powf(l),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines() {
        let m = parse_kv("# header\n\nOmegaT = 2 # gap\n  beta=1e-5\n").unwrap();
        assert_eq!(m["OmegaT"].value, "2");
        assert_eq!(m["beta"].line, 4);
    }

    #[test]
    fn malformed_lines_are_located() {
        let e = parse_kv("OmegaT = 2\nnonsense\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = parse_kv("beta = 1\nbeta = 2\n").unwrap_err();
        assert_eq!((e.line, e.field.as_deref()), (Some(2), Some("beta")));
    }

    #[test]
    fn defaults_and_geometry() {
        let m = parse_kv("OmegaT = 5\nL_over_T = 7\nbeta = 1e-15\n").unwrap();
        let p = Params::from_map(&m).unwrap();
        assert_eq!((p.z_a, p.z_b, p.lambda_a, p.sigma), (0.0, 7.0, 0.1, 0.0));
        assert_eq!(p.regime, Regime::Auto);
        assert!(p.shock.is_none());
        let s = p.scenario().unwrap();
        assert_eq!(s.detector_b.position[2], 7.0);
    }

    #[test]
    fn missing_gap_names_the_field() {
        let m = parse_kv("L_over_T = 7\nbeta = 0\n").unwrap();
        let e = Params::from_map(&m).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("OmegaT"));
        assert!(e.to_string().contains("OmegaT"));
    }

    #[test]
    fn bad_values_are_rejected() {
        for text in [
            "OmegaT = x\nL_over_T = 1\nbeta = 0",
            "OmegaT = 1\nL_over_T = 1\nbeta = 0\nalpha = 1",
            "OmegaT = 1\nL_over_T = 1\nzB_over_T = 1\nbeta = 0",
            "OmegaT = 1\nL_over_T = 1\nbeta = 0\nregime = fast",
            "OmegaT = 1\nL_over_T = 1\nbeta = 0\ncolour = red",
            "OmegaT = 1\nL_over_T = 1\nbeta = 0\nspacetime = shockwave",
        ] {
            assert!(Params::from_map(&parse_kv(text).unwrap()).is_err(), "{text}");
        }
    }

    #[test]
    fn shockwave_is_implied_by_its_strength() {
        let m = parse_kv("OmegaT = 2\nzA_over_T = -0.5\nzB_over_T = 7\naT = 1\nbeta = 1e-5\n").unwrap();
        let p = Params::from_map(&m).unwrap();
        assert_eq!(p.shock, Some((1.0, 0.0)));
        assert!(matches!(p.scenario().unwrap().spacetime, Spacetime::Shockwave(_)));
    }
}
