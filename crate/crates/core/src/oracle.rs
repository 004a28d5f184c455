//! Slow brute-force evaluation of the Minkowski matrix elements, kept
//! independent of the closed forms and of the adaptive engine.
//!
//! With `t1 = m + u/2`, `t2 = m - u/2` the Gaussian switching makes the
//! `m` integral elementary, leaving
//!
//! ```text
//! I = lambda^2 ∫ du G(u) W(u),    J = -lambda^2 ∫_{u >= 0} du G(u) W(u)
//! ```
//!
//! Smeared detectors use the mode sum
//! `W(u) = (1/4 pi^2) ∫_0^∞ dk k e^{-k^2 sigma^2/2} sinc(kL) e^{-iku}`
//! on a tensor grid in `(u, k)`; pointlike detectors split the
//! distribution `1/(L^2 - (u - i eps)^2)` into principal values and
//! delta terms (Sokhotski–Plemelj), or `1/(u - i eps)^2` into a Hadamard
//! finite part and `delta'`. Every integral is a composite Simpson rule.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::detector::DetectorParams;
use crate::elements::Estimate;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Simpson points along each axis (made odd if even).
    pub grid_points_per_dim: usize,
    /// Half-width of the `u` window around the centre offset, units of `T`.
    pub truncation_radius: f64,
    /// Upper end of the momentum grid; `None` picks `9 / sigma`.
    pub k_max: Option<f64>,
    /// When positive, pointlike kernels are sampled at this regulator
    /// instead of being split into distributions.
    pub eps: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_points_per_dim: 2001,
            truncation_radius: 10.0,
            k_max: None,
            eps: 0.0,
        }
    }
}

impl OracleConfig {
    fn points(&self) -> Result<usize> {
        if self.grid_points_per_dim < 5 || !(self.truncation_radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "oracle grid needs at least 5 points and a positive radius, got {} and {}",
                self.grid_points_per_dim, self.truncation_radius
            )));
        }
        Ok(self.grid_points_per_dim | 1)
    }

    fn coarser(&self) -> OracleConfig {
        OracleConfig {
            grid_points_per_dim: (self.points().unwrap_or(5) - 1) / 2 + 1,
            ..*self
        }
    }
}

/// Composite Simpson rule with `n` (odd) points.
fn simpson(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let h = (hi - lo) / (n - 1) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let w = if i == 0 || i == n - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * f(lo + i as f64 * h);
    }
    acc * h / 3.0
}

/// `G(u) = C exp(-(u - d)^2 / (2 T^2) + i w u)` and its first two
/// derivatives.
#[derive(Debug, Clone, Copy)]
struct Profile {
    c: Complex64,
    d: f64,
    t: f64,
    w: f64,
}

impl Profile {
    fn new(j: &DetectorParams, k: &DetectorParams, signs: (i8, i8)) -> Self {
        let (p, q) = (signs.0 as f64, signs.1 as f64);
        let t = j.width;
        let sum = p * j.gap + q * k.gap;
        let mid = 0.5 * (j.center + k.center);
        let c = (PI / 2.0).sqrt() * t * Complex64::new(-sum * sum * t * t / 8.0, sum * mid).exp();
        Profile {
            c,
            d: j.center - k.center,
            t,
            w: 0.5 * (p * j.gap - q * k.gap),
        }
    }

    fn phase_slope(&self, u: f64) -> Complex64 {
        Complex64::new(-(u - self.d) / (self.t * self.t), self.w)
    }

    fn g(&self, u: f64) -> Complex64 {
        let x = (u - self.d) / self.t;
        self.c * Complex64::new(-0.5 * x * x, self.w * u).exp()
    }

    fn g1(&self, u: f64) -> Complex64 {
        self.g(u) * self.phase_slope(u)
    }

    fn g2(&self, u: f64) -> Complex64 {
        let s = self.phase_slope(u);
        self.g(u) * (s * s - 1.0 / (self.t * self.t))
    }
}

/// `∫_lo^hi g(u) / (c - u + i0) du`.
fn first_order_pole(p: &Profile, c: f64, lo: f64, hi: f64, n: usize) -> Complex64 {
    let inside = c > lo && c < hi;
    if !inside {
        return simpson(lo, hi, n, |u| p.g(u) / (c - u));
    }
    let gc = p.g(c);
    let tiny = 1e-12 * (hi - lo);
    let smooth = simpson(lo, hi, n, |u| {
        if (u - c).abs() < tiny {
            -p.g1(c)
        } else {
            (p.g(u) - gc) / (c - u)
        }
    });
    smooth + gc * ((c - lo) / (hi - c)).ln() - Complex64::new(0.0, PI) * gc
}

/// `∫_lo^hi g(u) / (u - i0)^2 du`.
fn second_order_pole(p: &Profile, lo: f64, hi: f64, n: usize) -> Result<Complex64> {
    if !(lo < 0.0 && hi > 0.0) {
        if lo <= 0.0 && hi >= 0.0 {
            return Err(Error::Divergent("double pole on the edge of the integration range".into()));
        }
        return Ok(simpson(lo, hi, n, |u| p.g(u) / (u * u)));
    }
    let (g0, g1, g2) = (p.g(0.0), p.g1(0.0), p.g2(0.0));
    let tiny = 1e-12 * (hi - lo);
    let smooth = simpson(lo, hi, n, |u| {
        if u.abs() < tiny {
            0.5 * g2
        } else {
            (p.g(u) - g0 - u * g1) / (u * u)
        }
    });
    // finite parts of ∫ du/u^2 and ∫ du/u, plus the delta' term
    let fp = g0 * (1.0 / lo - 1.0 / hi) + g1 * (hi / -lo).ln();
    Ok(smooth + fp + Complex64::new(0.0, PI) * g1)
}

fn separation(j: &DetectorParams, k: &DetectorParams) -> f64 {
    let d: f64 = (0..3).map(|i| (j.position[i] - k.position[i]).powi(2)).sum();
    d.sqrt()
}

/// `∫_lo^hi G(u) W(u) du` without the couplings.
fn integrate(j: &DetectorParams, k: &DetectorParams, signs: (i8, i8), ordered: bool, cfg: &OracleConfig) -> Result<Complex64> {
    let n = cfg.points()?;
    let p = Profile::new(j, k, signs);
    let r = cfg.truncation_radius * p.t;
    let (mut lo, hi) = (p.d - r, p.d + r);
    if ordered {
        if hi <= 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        lo = lo.max(0.0);
    }
    let l = separation(j, k);
    let norm = 1.0 / (4.0 * PI * PI);
    let s2 = 0.25 * (j.smearing.powi(2) + k.smearing.powi(2));

    if s2 > 0.0 {
        let sigma = (2.0 * s2).sqrt();
        let k_max = cfg.k_max.unwrap_or(9.0 / sigma);
        let weight = |kk: f64| {
            let sinc = if l == 0.0 || kk == 0.0 { kk } else { (kk * l).sin() / l };
            sinc * (-kk * kk * s2).exp()
        };
        let value = simpson(0.0, k_max, n, |kk| {
            let w = weight(kk);
            if w == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            w * simpson(lo, hi, n, |u| p.g(u) * Complex64::new(0.0, -kk * u).exp())
        });
        return Ok(norm * value);
    }

    if cfg.eps > 0.0 {
        let e = Complex64::new(0.0, cfg.eps);
        return Ok(norm * simpson(lo, hi, n, |u| p.g(u) / (l * l - (u - e) * (u - e))));
    }
    if l < 1e-12 {
        if ordered {
            return Err(Error::Divergent(
                "time-ordered pointlike self term; only its real part after combination is finite".into(),
            ));
        }
        return Ok(-norm * second_order_pole(&p, lo, hi, n)?);
    }
    let plus = first_order_pole(&p, l, lo, hi, n);
    let minus = first_order_pole(&p, -l, lo, hi, n);
    Ok(norm / (2.0 * l) * (plus - minus))
}

fn with_error(f: impl Fn(&OracleConfig) -> Result<Complex64>, cfg: &OracleConfig) -> Result<Estimate> {
    let fine = f(cfg)?;
    let coarse = f(&cfg.coarser())?;
    Ok(Estimate::new(fine, (fine - coarse).norm() / 15.0))
}

/// Brute-force `I_jk^(pq)` for Minkowski detectors.
pub fn brute_i(j: &DetectorParams, k: &DetectorParams, signs: (i8, i8), cfg: &OracleConfig) -> Result<Estimate> {
    let lam = j.coupling * k.coupling;
    with_error(|c| Ok(lam * integrate(j, k, signs, false, c)?), cfg)
}

/// Brute-force `J_jk^(pq)`. Pointlike self terms are divergent.
pub fn brute_j(j: &DetectorParams, k: &DetectorParams, signs: (i8, i8), cfg: &OracleConfig) -> Result<Estimate> {
    let lam = j.coupling * k.coupling;
    with_error(|c| Ok(-lam * integrate(j, k, signs, true, c)?), cfg)
}

/// Brute-force `lambda^2 Y = J^(-+) + J^(+-)*` as `(re, im)`. For
/// pointlike detectors only the real part exists; it comes from
/// `Re[Y] = -(I^(-+) + I^(+-)) / 2`.
pub fn brute_y(d: &DetectorParams, cfg: &OracleConfig) -> Result<(f64, Option<f64>)> {
    if d.smearing > 0.0 {
        let y = brute_j(d, d, (-1, 1), cfg)?.value + brute_j(d, d, (1, -1), cfg)?.value.conj();
        Ok((y.re, Some(y.im)))
    } else {
        let i = brute_i(d, d, (-1, 1), cfg)?.value + brute_i(d, d, (1, -1), cfg)?.value;
        Ok((-0.5 * i.re, None))
    }
}

/// `log2` of the ratio of successive differences over three grids.
pub fn observed_order(f: impl Fn(&OracleConfig) -> Result<Complex64>, cfg: &OracleConfig) -> Result<f64> {
    let c1 = cfg.coarser();
    let c2 = c1.coarser();
    let (a, b, c) = (f(&c2)?, f(&c1)?, f(cfg)?);
    Ok(((a - b).norm() / (b - c).norm()).log2())
}

/// Parameter sets of the golden corpus: `(Omega T, L/T, dt/T, sigma/T)`.
pub const GOLDEN_SETS: [(f64, f64, f64, f64); 8] = [
    (2.0, 1.0, 0.0, 0.5),
    (2.0, 1.0, 0.0, 1.0),
    (5.0, 7.0, 0.0, 0.0),
    (2.0, 1.0, 0.0, 0.0),
    (1.0, 3.0, 1.5, 0.3),
    (3.5, 0.5, -2.0, 0.8),
    (0.7, 9.0, 2.5, 0.1),
    (4.0, 4.0, -1.0, 0.0),
];

/// The coupling used for every corpus record.
pub const GOLDEN_COUPLING: f64 = 0.1;

/// The two detectors of a corpus record: A at the origin, B displaced
/// by `L` along `z` and switched `dt` later.
pub fn golden_pair(set: (f64, f64, f64, f64)) -> (DetectorParams, DetectorParams) {
    let (w, l, dt, sigma) = set;
    let a = DetectorParams::pointlike(GOLDEN_COUPLING, w, 0.0, 0.0).with_smearing(sigma);
    let b = DetectorParams::pointlike(GOLDEN_COUPLING, w, dt, l).with_smearing(sigma);
    (a, b)
}

/// Evaluates the golden corpus and formats it as a plain-text table.
pub fn regenerate_corpus(cfg: &OracleConfig) -> Result<String> {
    let mut out = String::new();
    out.push_str("# udw golden values v1\n");
    out.push_str("# omega_t l_over_t dt_over_t sigma_over_t lambda element re im abs_error\n");
    for set in GOLDEN_SETS {
        let (a, b) = golden_pair(set);
        let mut rows: Vec<(&str, Estimate)> = vec![
            ("I_AA_mp", brute_i(&a, &a, (-1, 1), cfg)?),
            ("I_AB_pp", brute_i(&a, &b, (1, 1), cfg)?),
        ];
        if set.1 > 0.0 {
            rows.push(("J_AB_mm", brute_j(&a, &b, (-1, -1), cfg)?));
        }
        if set.3 > 0.0 {
            let y = brute_j(&a, &a, (-1, 1), cfg)?.add(brute_j(&a, &a, (1, -1), cfg)?.conj());
            rows.push(("Y_A", y));
        }
        for (name, e) in rows {
            writeln!(
                out,
                "{} {} {} {} {} {} {:.17e} {:.17e} {:.3e}",
                set.0, set.1, set.2, set.3, GOLDEN_COUPLING, name, e.value.re, e.value.im, e.abs_error
            )
            .expect("writing to a String cannot fail");
        }
    }
    Ok(out)
}
