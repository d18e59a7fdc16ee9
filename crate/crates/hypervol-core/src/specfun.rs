//! Special-function kernel: complex dilogarithm and Lobachevsky function.
//!
//! `li2` is the principal branch of Li2(z) = -int_0^z ln(1-t)/t dt, analytic
//! on the plane cut along the real interval (1, oo). Real arguments on the
//! cut take the limit from below (`Im Li2(x + i0^-) = -pi ln x`), the common
//! convention for volume formulas.
//!
//! `lobachevsky` is L(x) = -int_0^x ln|2 sin t| dt, odd and pi-periodic,
//! related to the dilogarithm on the unit circle by
//! `Im Li2(e^{ix}) = 2 L(x/2)`. Ideal-tetrahedron volumes are sums of three
//! Lobachevsky values (Milnor's formula).

use core::f64::consts::{FRAC_PI_2, PI};
use num_complex::Complex64;

/// pi^2/6 = Li2(1).
pub const PI_SQUARED_OVER_6: f64 = 1.6449340668482264;

/// Series / functional-equation split for `li2`:
/// - `|z| <= 0.5`: defining power series (converges to 1e-17 in <= 60 terms);
/// - `|1 - z| <= 0.5`: reflection `Li2(z) = pi^2/6 - ln z ln(1-z) - Li2(1-z)`;
/// - `|z| >= 2`: inversion `Li2(z) = -Li2(1/z) - pi^2/6 - ln^2(-z)/2`;
/// - remaining annulus: Bernoulli series in `u = -ln(1-z)` (see below).
const SERIES_RADIUS: f64 = 0.5;
const INVERSION_RADIUS: f64 = 2.0;

/// B_{2n}/(2n+1)! for n = 1..=36: coefficients of the expansion
/// `Li2(z) = u - u^2/4 + sum_n B_{2n} u^{2n+1}/(2n+1)!`, `u = -ln(1-z)`.
/// The expansion converges for |u| < 2 pi; on the annulus it is applied to,
/// |u| <= sqrt(ln^2 3 + pi^2) < 3.33, so the tail at n = 36 is below 1e-19.
// Literals are kept at the generating precision so they can be diffed
// against the table generator's output verbatim.
#[allow(clippy::excessive_precision)]
const LI2_U_COEFFS: [f64; 36] = [
    0.027777777777777776,
    -0.00027777777777777778,
    4.7241118669690098e-6,
    -9.1857730746619636e-8,
    1.8978869988970999e-9,
    -4.0647616451442255e-11,
    8.9216910204564526e-13,
    -1.9939295860721076e-14,
    4.5189800296199182e-16,
    -1.0356517612181247e-17,
    2.395218621026187e-19,
    -5.5817858743250093e-21,
    1.3091507554183213e-22,
    -3.0874198024267403e-24,
    7.3159756527022034e-26,
    -1.7408456572340007e-27,
    4.1576356446138997e-29,
    -9.9621484882846221e-31,
    2.3940344248961653e-32,
    -5.7683473553673901e-34,
    1.3931794796470080e-35,
    -3.3721219654850895e-37,
    8.1782087775621026e-39,
    -1.9870108311523859e-40,
    4.8357785180405509e-42,
    -1.1786937248718384e-43,
    2.8770964081172571e-45,
    -7.0320590981560280e-47,
    1.7208603145033146e-48,
    -4.2160723905604455e-50,
    1.0340406405133039e-51,
    -2.5386630625994653e-53,
    6.2385531769245909e-55,
    -1.5344398069134650e-56,
    3.7772946355785502e-58,
    -9.3058621248046866e-60,
];

/// zeta(2n)/(n (2n+1) pi^{2n}) for n = 1..=32: coefficients of the log
/// series for the Lobachevsky function (see [`lobachevsky`]). After folding
/// to |x| <= pi/2 the term ratio is <= 1/4, so the tail at n = 32 is below
/// 1e-19.
#[allow(clippy::excessive_precision)]
const LOBACHEVSKY_COEFFS: [f64; 32] = [
    0.055555555555555555,
    0.0011111111111111111,
    5.0390526581002771e-5,
    2.9394473838918283e-6,
    1.9434362868706303e-7,
    1.3874386415425623e-8,
    1.0440927548511323e-9,
    8.1671355845513526e-11,
    6.5812416715815769e-12,
    5.4297979058552816e-13,
    4.5664886559293724e-14,
    3.9019511366374807e-15,
    3.3790623077255918e-16,
    2.9599033661708998e-17,
    2.6184896805573515e-18,
    2.3365234891261434e-19,
    2.1008128379177150e-20,
    1.9016489757812574e-21,
    1.7317557154403702e-22,
    1.5855912475693460e-23,
    1.4588733690007642e-24,
    1.3482499313926237e-25,
    1.2510658289125953e-26,
    1.1651954737967480e-27,
    1.0889205165946837e-28,
    1.0208393500224526e-29,
    9.5979928233376828e-31,
    9.0484510668865125e-32,
    8.5517968233421267e-33,
    8.1013342067605583e-34,
    7.6914044586143624e-35,
    7.3171980945550043e-36,
];

/// Principal-branch complex dilogarithm, cut along `(1, oo)`.
///
/// Exactly-real arguments `x > 1` evaluate on the lower edge of the cut
/// (limit from below). Elsewhere the function is continuous, and IEEE signed
/// zeros select the expected edge for arguments with `im = -0.0`.
pub fn li2(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.re == 1.0 && z.im == 0.0 {
        return Complex64::new(PI_SQUARED_OVER_6, 0.0);
    }
    let z = if z.im == 0.0 && z.im.is_sign_positive() && z.re > 1.0 {
        // Real input on the cut: take the limit from below.
        Complex64::new(z.re, -0.0)
    } else {
        z
    };
    li2_inner(z)
}

fn li2_inner(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r <= SERIES_RADIUS {
        return li2_series(z);
    }
    let one_minus = Complex64::new(1.0, 0.0) - z;
    if one_minus.norm() <= SERIES_RADIUS {
        // Reflection: Li2(z) + Li2(1-z) = pi^2/6 - ln z ln(1-z).
        return Complex64::new(PI_SQUARED_OVER_6, 0.0) - z.ln() * one_minus.ln()
            - li2_series(one_minus);
    }
    if r >= INVERSION_RADIUS {
        // Inversion: Li2(z) + Li2(1/z) = -pi^2/6 - ln^2(-z)/2.
        let ln_neg = (-z).ln();
        return -li2_series(z.inv())
            - Complex64::new(PI_SQUARED_OVER_6, 0.0)
            - 0.5 * ln_neg * ln_neg;
    }
    li2_u_series(z)
}

/// Defining series, for `|z| <= 1/2`.
fn li2_series(z: Complex64) -> Complex64 {
    let mut term = z;
    let mut sum = z;
    for k in 2..80u32 {
        term *= z;
        let add = term / ((k * k) as f64);
        sum += add;
        if add.norm_sqr() <= 1e-34 * sum.norm_sqr() {
            break;
        }
    }
    sum
}

/// Expansion in `u = -ln(1-z)`, for the annulus the other regions miss.
/// Agrees with the principal branch there because `ln(1-z)` carries the same
/// cut as Li2 and `|Im u| < pi` keeps the expansion inside its disk of
/// convergence.
fn li2_u_series(z: Complex64) -> Complex64 {
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    let mut upow = u; // u^{2n-1}
    for c in LI2_U_COEFFS {
        upow *= u2;
        let add = c * upow;
        sum += add;
        if add.norm_sqr() <= 1e-34 * sum.norm_sqr() {
            break;
        }
    }
    sum
}

/// Distance from `z` to the branch cut `[1, oo)` of the dilogarithm,
/// treating the cut as a subset of the plane.
pub fn li2_cut_distance(z: Complex64) -> f64 {
    if z.re >= 1.0 {
        libm::fabs(z.im)
    } else {
        (z - Complex64::new(1.0, 0.0)).norm()
    }
}

/// Lobachevsky function `L(x) = -int_0^x ln|2 sin t| dt`.
///
/// Odd and pi-periodic; maximum at pi/6, `L(pi/2) = 0`. The argument is
/// folded to `[-pi/2, pi/2]` and evaluated by the log series
/// `L(x) = x - x ln(2x) + sum_{n>=1} zeta(2n) x^{2n+1} / (n (2n+1) pi^{2n})`,
/// accurate to full double precision on the folded range.
pub fn lobachevsky(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // Reduce modulo pi to [-pi/2, pi/2]. The quotient is exact enough for
    // the moderate arguments used here; huge-argument reduction is out of
    // scope for a geometric library.
    let r = x - PI * libm::round(x / PI);
    let a = libm::fabs(r);
    if a == 0.0 {
        return 0.0;
    }
    if a >= FRAC_PI_2 {
        // Folding lands exactly on pi/2 only for half-integer multiples.
        return 0.0;
    }
    let mut sum = a - a * libm::log(2.0 * a);
    let a2 = a * a;
    let mut pow = a; // a^{2n+1} as n advances
    for c in LOBACHEVSKY_COEFFS {
        pow *= a2;
        let add = c * pow;
        sum += add;
        if libm::fabs(add) <= 1e-17 * libm::fabs(sum) {
            break;
        }
    }
    if r < 0.0 {
        -sum
    } else {
        sum
    }
}

/// Milnor's volume of an ideal hyperbolic tetrahedron with dihedral angles
/// `(alpha, beta, gamma)` at each vertex: `L(alpha) + L(beta) + L(gamma)`.
///
/// The three angles must be positive and sum to pi.
pub fn milnor_ideal_volume(alpha: f64, beta: f64, gamma: f64) -> Result<f64, MilnorError> {
    for v in [alpha, beta, gamma] {
        if !(v > 0.0 && v < PI) {
            return Err(MilnorError::AngleDomain { value: v });
        }
    }
    let sum = alpha + beta + gamma;
    if libm::fabs(sum - PI) > 1e-9 {
        return Err(MilnorError::AngleSum { sum });
    }
    Ok(lobachevsky(alpha) + lobachevsky(beta) + lobachevsky(gamma))
}

/// Domain errors for [`milnor_ideal_volume`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MilnorError {
    /// An angle is outside `(0, pi)`.
    AngleDomain { value: f64 },
    /// The angles do not sum to pi within 1e-9.
    AngleSum { sum: f64 },
}

impl core::fmt::Display for MilnorError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::AngleDomain { value } => write!(f, "angle {value} outside (0, pi)"),
            Self::AngleSum { sum } => write!(f, "angles sum to {sum}, expected pi"),
        }
    }
}

impl core::error::Error for MilnorError {}
