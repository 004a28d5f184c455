//! Error-function family for real and complex arguments.
//!
//! Every complex function here is routed through the Faddeeva function
//! `w(z) = exp(-z^2) erfc(-iz)`, so products such as `exp(-g^2) erfc(i g)`
//! stay finite long after their factors have overflowed separately. All
//! functions are entire, so no branch bookkeeping is needed.

use errorfunctions::{ComplexErrorFunctions, RealErrorFunctions};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `1/sqrt(pi)`
pub const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
/// `sqrt(pi)`
pub const SQRT_PI: f64 = 1.772_453_850_905_516;

const MAX_ERF_ARG: f64 = 1e8;

/// Faddeeva function `w(z) = exp(-z^2) erfc(-iz)`.
pub fn faddeeva(z: Complex64) -> Complex64 {
    z.w()
}

/// Complex error function.
pub fn erf(z: Complex64) -> Result<Complex64> {
    if !(z.norm() < MAX_ERF_ARG) {
        return Err(Error::Domain(format!("erf argument {z} outside |z| < 1e8")));
    }
    finite("erf", ComplexErrorFunctions::erf(z))
}

/// Complex complementary error function.
pub fn erfc(z: Complex64) -> Result<Complex64> {
    if !(z.norm() < MAX_ERF_ARG) {
        return Err(Error::Domain(format!("erfc argument {z} outside |z| < 1e8")));
    }
    finite("erfc", ComplexErrorFunctions::erfc(z))
}

/// Scaled complementary error function `exp(z^2) erfc(z)`.
///
/// Finite wherever `Re(z) >= 0`; in the left half-plane it grows like
/// `2 exp(z^2)` and is finite while `Re(z^2) < ~709`.
pub fn erfc_scaled(z: Complex64) -> Complex64 {
    ComplexErrorFunctions::erfcx(z)
}

/// Real error function.
pub fn erf_real(x: f64) -> f64 {
    RealErrorFunctions::erf(x)
}

/// Real scaled complementary error function `exp(x^2) erfc(x)`.
pub fn erfcx_real(x: f64) -> f64 {
    RealErrorFunctions::erfcx(x)
}

/// Imaginary error function `erfi(x) = -i erf(ix)`.
///
/// Overflows for `|x| > ~26.5`; use [`gauss_damped_erfi`] for the
/// Gaussian-damped combination instead.
pub fn erfi(x: f64) -> Result<f64> {
    let v = RealErrorFunctions::erfi(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("erfi"))
    }
}

/// `exp(-x^2) erfi(x)`, i.e. `2/sqrt(pi)` times Dawson's integral.
///
/// Finite for every finite `x`, odd, and decays like `1/(x sqrt(pi))`.
pub fn gauss_damped_erfi(x: f64) -> f64 {
    2.0 * FRAC_1_SQRT_PI * RealErrorFunctions::dawson(x)
}

/// `1 - sqrt(pi) x erfcx(x)`.
///
/// For large positive `x` the two terms agree to `1 - 1/(2x^2)`, so the
/// direct difference loses digits; there the Laplace continued fraction
/// `sqrt(pi) erfcx(x) = 1/(x + K)` gives the difference as `K/(x + K)`.
pub fn one_minus_sqrtpi_x_erfcx(x: f64) -> f64 {
    if x < 3.0 {
        return 1.0 - SQRT_PI * x * erfcx_real(x);
    }
    if x.is_infinite() {
        return 0.0;
    }
    // K = (1/2)/(x + (2/2)/(x + (3/2)/(x + ...)))
    let mut k = 0.0;
    for n in (1..=120).rev() {
        k = (0.5 * n as f64) / (x + k);
    }
    k / (x + k)
}

fn finite(name: &'static str, v: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
    }

    /// Maclaurin series erf(z) = 2/sqrt(pi) sum (-1)^n z^(2n+1) / (n! (2n+1)).
    fn erf_series(z: Complex64) -> Complex64 {
        let z2 = z * z;
        let mut term = z;
        let mut sum = z;
        for n in 1..400 {
            term = -term * z2 / n as f64;
            let add = term / (2 * n + 1) as f64;
            sum += add;
            if add.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum * (2.0 * FRAC_1_SQRT_PI)
    }

    /// erfi(x) = 2/sqrt(pi) sum x^(2n+1) / (n! (2n+1)).
    fn erfi_series(x: f64) -> f64 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        for n in 1..400 {
            term *= x2 / n as f64;
            let add = term / (2 * n + 1) as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum * 2.0 * FRAC_1_SQRT_PI
    }

    #[test]
    fn erf_values() {
        assert_eq!(erf(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let one = erf(c(1.0, 0.0)).unwrap();
        assert!((one.re - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert!((one.re - erf_series(c(1.0, 0.0)).re).abs() < 1e-15);
        let z = erf(c(1.0, 1.0)).unwrap();
        let expect = c(1.316_151_281_697_947_6, 0.190_453_469_237_834_7);
        assert!(rel(z, expect) < 1e-14);
        assert!(rel(z, erf_series(c(1.0, 1.0))) < 1e-13);
    }

    #[test]
    fn erf_matches_series_and_faddeeva_identity() {
        // erf(z) = 1 - exp(-z^2) w(iz)
        for &(x, y) in &[(0.3, -0.2), (1.5, 2.0), (-2.0, 0.7), (3.1, -1.1), (0.01, 4.0)] {
            let z = c(x, y);
            let e = erf(z).unwrap();
            assert!(rel(e, erf_series(z)) < 1e-12, "{z}");
            let via_w = c(1.0, 0.0) - (-z * z).exp() * faddeeva(c(0.0, 1.0) * z);
            assert!(rel(e, via_w) < 1e-12, "{z}");
        }
    }

    #[test]
    fn erf_odd_and_conjugate() {
        for &(x, y) in &[(0.4, 0.1), (2.5, -3.0), (7.0, 0.2), (-0.1, 9.0)] {
            let z = c(x, y);
            assert!(rel(erf(-z).unwrap(), -erf(z).unwrap()) < 1e-15);
            assert!(rel(erf(z.conj()).unwrap(), erf(z).unwrap().conj()) < 1e-15);
        }
    }

    #[test]
    fn erf_rejects_huge_arguments() {
        assert!(matches!(erf(c(2e8, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(erf(c(f64::NAN, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn erf_overflow_is_reported() {
        // exp(-z^2) with z = 30i is exp(900)
        assert!(matches!(erf(c(0.5, 30.0)), Err(Error::Overflow(_))));
    }

    #[test]
    fn erfc_scaled_values() {
        assert_eq!(erfc_scaled(c(0.0, 0.0)), c(1.0, 0.0));
        let x = 50.0;
        let asym = 1.0 / (x * SQRT_PI);
        let v = erfc_scaled(c(x, 0.0));
        assert!((v.re - asym).abs() / asym < 1e-3);
        // reflection: erfc(-z) = 2 - erfc(z)
        let z = c(2.0, 0.0);
        let lhs = erfc(-z).unwrap();
        let rhs = c(2.0, 0.0) - (-z * z).exp() * erfc_scaled(z);
        assert!(rel(lhs, rhs) < 1e-14);
    }

    #[test]
    fn erfc_scaled_unscales() {
        for &(x, y) in &[(0.5, 0.5), (3.0, -2.0), (-1.0, 1.5), (0.0, 4.0)] {
            let z = c(x, y);
            let direct = erfc(z).unwrap();
            let scaled = (-z * z).exp() * erfc_scaled(z);
            assert!(rel(direct, scaled) < 1e-12, "{z}");
        }
    }

    #[test]
    fn erfc_scaled_survives_large_imaginary_arguments() {
        // exp(-g^2) erfc(-i g) for g = 40 is O(1) although erfc(-40i) ~ e^1600
        let v = erfc_scaled(c(0.0, -40.0));
        assert!(v.re.is_finite() && v.im.is_finite());
        assert!((v.re - (-1600.0f64).exp()).abs() < 1e-300);
        assert!((v.im - gauss_damped_erfi(40.0)).abs() < 1e-15);
    }

    #[test]
    fn erfi_values() {
        assert_eq!(erfi(0.0).unwrap(), 0.0);
        let one = erfi(1.0).unwrap();
        assert!((one - 1.650_425_758_797_542_8).abs() < 1e-15);
        assert!((one - erfi_series(1.0)).abs() < 1e-14);
        assert_eq!(erfi(-1.5).unwrap(), -erfi(1.5).unwrap());
        for &x in &[0.2, 2.0, 4.5, 6.0] {
            let e = erfi(x).unwrap();
            assert!((e - erfi_series(x)).abs() / e < 1e-12, "{x}");
            let via_erf = erf(c(0.0, x)).unwrap() * c(0.0, -1.0);
            assert!((e - via_erf.re).abs() / e < 1e-12);
        }
        assert!(erfi(25.9).is_ok());
        assert!(matches!(erfi(30.0), Err(Error::Overflow(_))));
    }

    #[test]
    fn gauss_damped_erfi_values() {
        assert_eq!(gauss_damped_erfi(0.0), 0.0);
        let expect = (-1.0f64).exp() * 1.650_425_758_797_542_8;
        assert!((gauss_damped_erfi(1.0) - expect).abs() < 1e-15);
        // asymptotic series exp(-x^2) erfi(x) ~ (1/(x sqrt(pi))) sum (2n-1)!!/(2x^2)^n
        let x: f64 = 30.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..8 {
            term *= (2 * n - 1) as f64 / (2.0 * x * x);
            sum += term;
        }
        let asym = sum / (x * SQRT_PI);
        assert!((gauss_damped_erfi(x) - asym).abs() / asym < 1e-6);
        assert!((gauss_damped_erfi(-x) + gauss_damped_erfi(x)).abs() == 0.0);
        assert!(gauss_damped_erfi(1e300).is_finite());
    }

    #[test]
    fn gauss_damped_erfi_matches_naive_product() {
        let mut x: f64 = -5.0;
        while x <= 5.0 {
            let naive = (-x * x).exp() * erfi_series(x);
            let v = gauss_damped_erfi(x);
            assert!((v - naive).abs() <= 1e-12 * naive.abs().max(1e-300), "{x}");
            x += 0.173;
        }
    }

    #[test]
    fn one_minus_sqrtpi_x_erfcx_is_stable() {
        // 1 - sqrt(pi) x erfcx(x) ~ 1/(2x^2) - 3/(4x^4) + 15/(8x^6)
        for &x in &[3.5f64, 10.0, 100.0, 1e4] {
            let x2 = x * x;
            let asym = 0.5 / x2 - 0.75 / (x2 * x2) + 1.875 / (x2 * x2 * x2) - 6.5625 / (x2 * x2 * x2 * x2);
            let v = one_minus_sqrtpi_x_erfcx(x);
            let next = 29.53125 / (x2 * x2 * x2 * x2 * x2);
            assert!((v - asym).abs() <= 2.0 * next + 1e-15 * asym, "{x}: {v} {asym}");
        }
        // both branches agree at the switch; reference value from 40-digit arithmetic
        let direct = 1.0 - SQRT_PI * 3.0 * erfcx_real(3.0);
        assert!((one_minus_sqrtpi_x_erfcx(3.0) - direct).abs() < 1e-14);
        assert!((one_minus_sqrtpi_x_erfcx(3.0) - 0.048_186_160_816_074_768).abs() < 1e-16);
        assert!((one_minus_sqrtpi_x_erfcx(10.0) - 0.004_926_812_175_530_252_6).abs() < 1e-17);
        assert_eq!(one_minus_sqrtpi_x_erfcx(0.0), 1.0);
    }
}
