//! Scenario data model: detector parameters, the initial two-qubit state,
//! the background spacetime and the approximation regime.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wightman::ShockwaveParams;

/// One static Unruh-DeWitt detector with Gaussian switching
/// `exp(-(t - center)^2 / width^2)` and Gaussian smearing of width
/// `smearing`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    pub coupling: f64,
    pub gap: f64,
    pub center: f64,
    pub width: f64,
    pub smearing: f64,
    pub position: [f64; 3],
}

impl DetectorParams {
    pub fn new(coupling: f64, gap: f64, center: f64, width: f64, smearing: f64, position: [f64; 3]) -> Result<Self> {
        let d = DetectorParams {
            coupling,
            gap,
            center,
            width,
            smearing,
            position,
        };
        d.validate()?;
        Ok(d)
    }

    /// Pointlike detector with unit switching width at `z` on the axis.
    pub fn pointlike(coupling: f64, gap: f64, center: f64, z: f64) -> Self {
        DetectorParams {
            coupling,
            gap,
            center,
            width: 1.0,
            smearing: 0.0,
            position: [0.0, 0.0, z],
        }
    }

    pub fn with_smearing(self, smearing: f64) -> Self {
        DetectorParams { smearing, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.coupling, self.gap, self.center, self.width, self.smearing]
            .iter()
            .chain(self.position.iter())
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("detector parameters must be finite".into()));
        }
        if !(self.width > 0.0) {
            return Err(Error::InvalidParameter(format!("switching width {} must be positive", self.width)));
        }
        if self.smearing < 0.0 {
            return Err(Error::InvalidParameter(format!("smearing width {} must be non-negative", self.smearing)));
        }
        if self.coupling < 0.0 {
            return Err(Error::InvalidParameter(format!("coupling {} must be non-negative", self.coupling)));
        }
        Ok(())
    }

    pub fn is_pointlike(&self) -> bool {
        self.smearing == 0.0
    }
}

/// `alpha |g g> + beta e^{i theta} |e e>` with `alpha^2 + beta^2 = 1`.
///
/// Both amplitudes are kept so that a state prepared from a tiny `beta`
/// (say `1e-30`) does not collapse to `alpha = 1` in double precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    alpha: f64,
    beta: f64,
    theta: f64,
}

impl InitialState {
    pub fn from_alpha(alpha: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha {alpha} outside [0, 1]")));
        }
        Ok(InitialState {
            alpha,
            beta: ((1.0 - alpha) * (1.0 + alpha)).sqrt(),
            theta: normalize_phase(theta)?,
        })
    }

    pub fn from_beta(beta: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidParameter(format!("beta {beta} outside [0, 1]")));
        }
        Ok(InitialState {
            alpha: ((1.0 - beta) * (1.0 + beta)).sqrt(),
            beta,
            theta: normalize_phase(theta)?,
        })
    }

    pub fn from_log10_beta(log10_beta: f64, theta: f64) -> Result<Self> {
        if !(log10_beta <= 0.0) {
            return Err(Error::InvalidParameter(format!("log10(beta) {log10_beta} must be <= 0")));
        }
        Self::from_beta(10f64.powf(log10_beta), theta)
    }

    /// The Bell state `(|g g> + e^{i theta} |e e>) / sqrt 2`.
    pub fn bell(theta: f64) -> Result<Self> {
        Self::from_alpha(std::f64::consts::FRAC_1_SQRT_2, theta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

fn normalize_phase(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::InvalidParameter("theta must be finite".into()));
    }
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2 pi for tiny negative input
    Ok(if t >= TAU { 0.0 } else { t })
}

/// Concurrence `2 alpha beta` of the initial state.
pub fn initial_concurrence(s: &InitialState) -> f64 {
    (2.0 * s.alpha * s.beta).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Spacetime {
    Minkowski,
    Shockwave(ShockwaveParams),
}

/// Which expansion of `|r14|^2` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// Initially weak entanglement around `alpha = 0`.
    WeakAlpha0,
    /// Initially weak entanglement around `beta = 0`.
    WeakBeta0,
    /// `|r14|^2` truncated at second order for sufficiently entangled states.
    Sufficient,
    /// The full density matrix; needs smeared detectors.
    ExactSmeared,
    /// Chosen from the state by [`Regime::select`].
    Auto,
}

impl Regime {
    pub const ALPHA_THRESHOLD: f64 = 1e-2;
    pub const BETA_THRESHOLD: f64 = 1e-2;
    pub const SUFFICIENT_FACTOR: f64 = 10.0;

    /// Picks an approximation from the state amplitudes and the coupling.
    ///
    /// `WeakAlpha0` when `alpha <= 1e-2`, `WeakBeta0` when `beta <= 1e-2`,
    /// `Sufficient` when `min(alpha, beta) >= 10 lambda^2`. States that fall
    /// in none, or in more than one, of these windows need an explicit
    /// choice.
    pub fn select(state: &InitialState, coupling: f64) -> Result<Regime> {
        let (a, b) = (state.alpha(), state.beta());
        let mut hits = Vec::new();
        if a <= Self::ALPHA_THRESHOLD {
            hits.push(Regime::WeakAlpha0);
        }
        if b <= Self::BETA_THRESHOLD {
            hits.push(Regime::WeakBeta0);
        }
        if a.min(b) >= Self::SUFFICIENT_FACTOR * coupling * coupling {
            hits.push(Regime::Sufficient);
        }
        match hits.as_slice() {
            [one] => Ok(*one),
            [] => {
                log::warn!("alpha = {a:e}, beta = {b:e} lies between the approximation windows");
                Err(Error::Regime(format!(
                    "alpha = {a:e}, beta = {b:e}, lambda = {coupling} fits no approximation window; choose a regime explicitly"
                )))
            }
            many => {
                log::warn!("alpha = {a:e}, beta = {b:e} lies in several approximation windows");
                Err(Error::Regime(format!(
                    "alpha = {a:e}, beta = {b:e}, lambda = {coupling} fits {many:?}; choose a regime explicitly"
                )))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::WeakAlpha0 => "weak_alpha0",
            Regime::WeakBeta0 => "weak_beta0",
            Regime::Sufficient => "sufficient",
            Regime::ExactSmeared => "exact_smeared",
            Regime::Auto => "auto",
        }
    }

    pub fn parse(s: &str) -> Option<Regime> {
        Some(match s {
            "weak_alpha0" => Regime::WeakAlpha0,
            "weak_beta0" => Regime::WeakBeta0,
            "sufficient" => Regime::Sufficient,
            "exact_smeared" | "exact" => Regime::ExactSmeared,
            "auto" => Regime::Auto,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub detector_a: DetectorParams,
    pub detector_b: DetectorParams,
    pub initial: InitialState,
    pub spacetime: Spacetime,
    pub regime: Regime,
}

/// Separations derived from a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Geometry {
    /// `|x_B - x_A|`
    pub l: f64,
    /// `t_B0 - t_A0`
    pub dt: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
}

impl Scenario {
    /// Checks the scenario invariants and returns the regime to use.
    pub fn validate(&self) -> Result<Regime> {
        self.check()?;
        let pointlike = self.detector_a.is_pointlike() || self.detector_b.is_pointlike();
        let regime = match self.regime {
            Regime::Auto => Regime::select(&self.initial, self.coupling())?,
            r => r,
        };
        if regime == Regime::ExactSmeared && pointlike {
            return Err(Error::Regime(
                "exact evaluation needs smeared detectors (sigma > 0): the pointlike Im[Y] diverges".into(),
            ));
        }
        Ok(regime)
    }

    /// The invariants that do not involve the regime.
    pub fn check(&self) -> Result<()> {
        self.detector_a.validate()?;
        self.detector_b.validate()?;
        derived_geometry(self)?;
        let pointlike = self.detector_a.is_pointlike() || self.detector_b.is_pointlike();
        if let Spacetime::Shockwave(p) = self.spacetime {
            p.validate()?;
            if !pointlike {
                return Err(Error::Regime("shockwave scenarios use pointlike detectors".into()));
            }
        }
        Ok(())
    }

    /// The larger of the two couplings.
    pub fn coupling(&self) -> f64 {
        self.detector_a.coupling.max(self.detector_b.coupling)
    }
}

/// `L`, `dt` and `Gamma_pm = (L +- dt) / (T sqrt(2 (1 + sigma^2/T^2)))`.
pub fn derived_geometry(s: &Scenario) -> Result<Geometry> {
    let (a, b) = (&s.detector_a, &s.detector_b);
    if a.width != b.width {
        return Err(Error::Mismatch(format!("switching widths {} and {}", a.width, b.width)));
    }
    if a.smearing != b.smearing {
        return Err(Error::Mismatch(format!("smearing widths {} and {}", a.smearing, b.smearing)));
    }
    if a.gap != b.gap {
        return Err(Error::Mismatch(format!("energy gaps {} and {}", a.gap, b.gap)));
    }
    let d: Vec<f64> = (0..3).map(|i| b.position[i] - a.position[i]).collect();
    let l = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    let dt = b.center - a.center;
    let t = a.width;
    let denom = t * (2.0 * (1.0 + (a.smearing / t).powi(2))).sqrt();
    Ok(Geometry {
        l,
        dt,
        gamma_plus: (l + dt) / denom,
        gamma_minus: (l - dt) / denom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(l: f64, dt: f64, sigma: f64) -> Scenario {
        let a = DetectorParams::pointlike(0.1, 5.0, 0.0, 0.0).with_smearing(sigma);
        let b = DetectorParams::pointlike(0.1, 5.0, dt, l).with_smearing(sigma);
        Scenario {
            detector_a: a,
            detector_b: b,
            initial: InitialState::from_beta(1e-15, 0.0).unwrap(),
            spacetime: Spacetime::Minkowski,
            regime: Regime::WeakBeta0,
        }
    }

    #[test]
    fn gamma_examples() {
        let g = derived_geometry(&scenario(7.0, 0.0, 0.0)).unwrap();
        assert!((g.gamma_plus - 7.0 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(g.gamma_plus, g.gamma_minus);

        let g = derived_geometry(&scenario(0.0, 2.0, 0.0)).unwrap();
        assert!((g.gamma_plus - 2f64.sqrt()).abs() < 1e-15);
        assert!((g.gamma_minus + 2f64.sqrt()).abs() < 1e-15);

        let g = derived_geometry(&scenario(7.0, 0.0, 1.0)).unwrap();
        assert!((g.gamma_plus - 3.5).abs() < 1e-15);
    }

    #[test]
    fn mismatch_detected() {
        let mut s = scenario(1.0, 0.0, 0.0);
        s.detector_b.width = 2.0;
        assert!(matches!(derived_geometry(&s), Err(Error::Mismatch(_))));
        let mut s = scenario(1.0, 0.0, 0.5);
        s.detector_b.smearing = 0.4;
        assert!(matches!(derived_geometry(&s), Err(Error::Mismatch(_))));
    }

    #[test]
    fn initial_concurrence_examples() {
        let bell = InitialState::bell(0.0).unwrap();
        assert!((initial_concurrence(&bell) - 1.0).abs() < 1e-15);
        assert_eq!(initial_concurrence(&InitialState::from_alpha(0.0, 0.0).unwrap()), 0.0);
        assert_eq!(initial_concurrence(&InitialState::from_alpha(1.0, 0.0).unwrap()), 0.0);
        let s = InitialState::from_beta(1e-5, 0.0).unwrap();
        assert!((initial_concurrence(&s) - 2e-5 * (1.0f64 - 1e-10).sqrt()).abs() < 1e-20);
    }

    #[test]
    fn tiny_beta_survives() {
        let s = InitialState::from_log10_beta(-30.0, 0.0).unwrap();
        assert_eq!(s.beta(), 1e-30);
        assert_eq!(s.alpha(), 1.0);
        assert!((initial_concurrence(&s) - 2e-30).abs() < 1e-44);
    }

    #[test]
    fn theta_is_normalized() {
        let s = InitialState::from_alpha(0.5, -std::f64::consts::PI).unwrap();
        assert!((s.theta() - std::f64::consts::PI).abs() < 1e-15);
        let s = InitialState::from_alpha(0.5, 3.0 * TAU + 1.0).unwrap();
        assert!((s.theta() - 1.0).abs() < 1e-12);
        assert!(InitialState::from_alpha(1.5, 0.0).is_err());
    }

    #[test]
    fn regime_selection() {
        let st = |b: f64| InitialState::from_beta(b, 0.0).unwrap();
        assert_eq!(Regime::select(&st(1e-5), 0.1).unwrap(), Regime::WeakBeta0);
        assert_eq!(Regime::select(&st(1.0), 0.1).unwrap(), Regime::WeakAlpha0);
        assert_eq!(Regime::select(&st(0.7), 0.1).unwrap(), Regime::Sufficient);
        assert!(Regime::select(&st(0.05), 0.1).is_err());
        // both weak windows at once are impossible, but weak and sufficient overlap for small lambda
        assert!(Regime::select(&st(5e-3), 1e-2).is_err());
    }

    #[test]
    fn scenario_invariants() {
        let mut s = scenario(7.0, 0.0, 0.0);
        s.regime = Regime::ExactSmeared;
        assert!(s.validate().is_err());
        let mut s = scenario(7.0, 0.0, 1.0);
        s.regime = Regime::ExactSmeared;
        assert_eq!(s.validate().unwrap(), Regime::ExactSmeared);
        s.spacetime = Spacetime::Shockwave(ShockwaveParams { a: 1.0, u0: 0.0 });
        assert!(s.validate().is_err());
    }
}
