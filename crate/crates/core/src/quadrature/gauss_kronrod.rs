//! 21-point Gauss-Kronrod rule with the QUADPACK error heuristic.

use num_complex::Complex;

use crate::Real;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_904_077_323_750,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Weights of the embedded 10-point Gauss rule, attached to XGK[1], XGK[3], ...
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Number of integrand evaluations per panel.
pub const POINTS: usize = 21;

/// Estimate for one panel.
#[derive(Debug, Clone, Copy)]
pub struct PanelEstimate<R> {
    pub value: Complex<R>,
    pub error: R,
    /// The error estimate sits at the rounding floor; bisecting cannot help.
    pub roundoff_limited: bool,
}

/// Applies the 21-point rule on `[a, b]`.
///
/// The integrand returns a value together with an absolute error already
/// attached to that value (zero for closed-form integrands, the inner
/// estimate for nested integrals); those errors are propagated with the
/// Kronrod weights.
pub fn gk21<R, F>(f: &mut F, a: R, b: R) -> PanelEstimate<R>
where
    R: Real,
    F: FnMut(R) -> (Complex<R>, R),
{
    let half = (b - a) * R::lit(0.5);
    let center = (a + b) * R::lit(0.5);
    let hl = half.abs();

    let mut fv1 = [Complex::new(R::zero(), R::zero()); 10];
    let mut fv2 = [Complex::new(R::zero(), R::zero()); 10];

    let (fc, ec) = f(center);
    let mut resk = fc * R::lit(WGK[10]);
    let mut resg = Complex::new(R::zero(), R::zero());
    let mut resabs = fc.norm() * R::lit(WGK[10]);
    let mut inner = ec * R::lit(WGK[10]);

    for j in 0..10 {
        let x = half * R::lit(XGK[j]);
        let (f1, e1) = f(center - x);
        let (f2, e2) = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        let wk = R::lit(WGK[j]);
        resk = resk + (f1 + f2) * wk;
        resabs = resabs + (f1.norm() + f2.norm()) * wk;
        inner = inner + (e1 + e2) * wk;
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * R::lit(WG[j / 2]);
        }
    }

    let mean = resk * R::lit(0.5);
    let mut resasc = (fc - mean).norm() * R::lit(WGK[10]);
    for j in 0..10 {
        resasc = resasc + ((fv1[j] - mean).norm() + (fv2[j] - mean).norm()) * R::lit(WGK[j]);
    }

    let resabs = resabs * hl;
    let resasc = resasc * hl;
    let mut err = ((resk - resg) * half).norm();
    if resasc != R::zero() && err != R::zero() {
        let scaled = (R::lit(200.0) * err / resasc).powf(R::lit(1.5));
        err = resasc * scaled.min(R::one());
    }
    let round = R::lit(50.0) * R::epsilon() * resabs;
    let mut roundoff_limited = false;
    if resabs > R::min_positive_value() / (R::lit(50.0) * R::epsilon()) && err <= round {
        err = round;
        roundoff_limited = true;
    }

    PanelEstimate {
        value: resk * half,
        error: err + inner * hl,
        roundoff_limited,
    }
}
