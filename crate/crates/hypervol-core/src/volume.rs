//! Volume of a generalized hyperbolic tetrahedron via the dilogarithm
//! formula of Murakami–Yano (2005) in Ushijima's extension to mildly
//! truncated tetrahedra (2006), plus Schläfli-based verification.
//!
//! With `a = e^{iA}, ..., f = e^{iF}`, define
//!
//! ```text
//! U(z) = (Li2(z) + Li2(abdez) + Li2(acdfz) + Li2(bcefz)
//!        - Li2(-abcz) - Li2(-aefz) - Li2(-bdfz) - Li2(-cdez)) / 2.
//! ```
//!
//! The two saddle points of `U` are the roots
//!
//! ```text
//! z_{1,2} = -2 (S ± i sqrt(-det G)) / Den,
//! S = sin A sin D + sin B sin E + sin C sin F,
//! Den = ad + be + cf + abf + ace + bcd + def + abcdef,
//! ```
//!
//! (`z1` takes `+i sqrt(-det G)` in this normalization, which lands on the
//! documented `(z1, z2) = (-i, +i)` for the fully symmetric octahedral
//! case), and the volume is `Im(U(z2) - U(z1)) / 2`, oriented so the value
//! is positive with the principal dilogarithm branch.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::shape::{
    validate_angles, AngleLabel, DihedralAngles, ShapeError, TetrahedronShape, VertexClass,
    DEFAULT_EPS,
};
use crate::specfun::{li2, li2_cut_distance};

/// Warn when a dilogarithm argument comes this close to the cut `(1, oo)`.
pub const CUT_WARNING_DISTANCE: f64 = 1e-8;

/// Reject saddle denominators with modulus at or below this.
pub const DENOMINATOR_EPS: f64 = 1e-12;

/// The two saddle points of `U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlePair {
    /// Root with `+i sqrt(-det G)` in the numerator (`-i` in the
    /// octahedral case).
    pub z1: Complex64,
    /// Root with `-i sqrt(-det G)` in the numerator (`+i` in the
    /// octahedral case).
    pub z2: Complex64,
}

/// Numerical cautions attached to a volume evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VolumeWarning {
    /// Some dilogarithm argument at saddle `which` (1 or 2) is within
    /// [`CUT_WARNING_DISTANCE`] of the branch cut.
    CutProximity { which: u8, distance: f64 },
    /// The oriented bracket came out negative; its absolute value was
    /// reported instead.
    NegativeBracket { value: f64 },
}

impl core::fmt::Display for VolumeWarning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::CutProximity { which, distance } => write!(
                f,
                "dilogarithm argument at z{which} within {distance:e} of the branch cut"
            ),
            Self::NegativeBracket { value } => {
                write!(f, "oriented bracket negative ({value:e}); reported |value|")
            }
        }
    }
}

/// Result of a volume evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeResult {
    volume: f64,
    saddles: SaddlePair,
    u1: Complex64,
    u2: Complex64,
    det_g: f64,
    warnings: Vec<VolumeWarning>,
}

impl VolumeResult {
    /// The hyperbolic volume (nonnegative, finite).
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Both saddle points.
    pub fn saddles(&self) -> SaddlePair {
        self.saddles
    }

    /// `(U(z1), U(z2))`.
    pub fn u_values(&self) -> (Complex64, Complex64) {
        (self.u1, self.u2)
    }

    /// Determinant of the Gram matrix.
    pub fn det_gram(&self) -> f64 {
        self.det_g
    }

    /// Warnings accumulated during evaluation.
    pub fn warnings(&self) -> &[VolumeWarning] {
        &self.warnings
    }
}

/// Failures of the volume pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum VolumeError {
    /// The angles do not define a generalized hyperbolic tetrahedron.
    Shape(ShapeError),
    /// `det G >= 0`: not a hyperbolic Gram matrix.
    NonHyperbolicGram { det_g: f64 },
    /// The saddle-point denominator (nearly) vanishes.
    DegenerateDenominator { modulus: f64 },
    /// A Schläfli operation hit an ideal vertex (infinite edge length).
    IdealVertex { vertex: usize },
    /// A finite-difference step left the validity region.
    StepOutsideValidity { label: AngleLabel },
}

impl From<ShapeError> for VolumeError {
    fn from(e: ShapeError) -> Self {
        Self::Shape(e)
    }
}

impl core::fmt::Display for VolumeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::Shape(e) => write!(f, "{e}"),
            Self::NonHyperbolicGram { det_g } => {
                write!(f, "det G = {det_g} is not negative")
            }
            Self::DegenerateDenominator { modulus } => {
                write!(f, "saddle denominator modulus {modulus:e} too small")
            }
            Self::IdealVertex { vertex } => {
                write!(f, "vertex {vertex} is ideal: edge length infinite")
            }
            Self::StepOutsideValidity { label } => {
                write!(f, "finite-difference step at angle {label} leaves the validity region")
            }
        }
    }
}

impl core::error::Error for VolumeError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Self::Shape(e) => Some(e),
            _ => None,
        }
    }
}

/// The eight dilogarithm arguments of `U` are `w_j z` with these signed
/// multipliers: `+` terms first, then the four `-` terms.
fn term_multipliers(angles: &[f64; 6]) -> ([Complex64; 4], [Complex64; 4]) {
    let [ea, eb, ec, ed, ee, ef] = angles.map(|t| Complex64::new(libm::cos(t), libm::sin(t)));
    (
        [
            Complex64::new(1.0, 0.0),
            ea * eb * ed * ee,
            ea * ec * ed * ef,
            eb * ec * ee * ef,
        ],
        [-(ea * eb * ec), -(ea * ee * ef), -(eb * ed * ef), -(ec * ed * ee)],
    )
}

/// Evaluates `U(z)` for arbitrary real angle parameters (the defining
/// series is entire in the angles, so negative values are meaningful for
/// reflection identities even though the volume pipeline restricts inputs
/// to `[0, pi)`).
pub fn u_function_signed(z: Complex64, angles: &[f64; 6]) -> Complex64 {
    let (pos, neg) = term_multipliers(angles);
    let mut sum = Complex64::new(0.0, 0.0);
    for w in pos {
        sum += li2(w * z);
    }
    for w in neg {
        sum -= li2(w * z);
    }
    0.5 * sum
}

/// Evaluates `U(z)` for validated dihedral angles.
pub fn u_function(z: Complex64, angles: &DihedralAngles) -> Complex64 {
    u_function_signed(z, &angles.as_array())
}

/// Computes both saddle points of `U` from the closed form.
///
/// Requires a hyperbolic Gram matrix (`det G < 0`); callers wanting full
/// realizability checking should go through [`tetra_volume`].
pub fn saddle_points(angles: &DihedralAngles) -> Result<SaddlePair, VolumeError> {
    let det_g = angles.gram().determinant();
    saddle_points_with_det(angles, det_g).map(|(pair, _)| pair)
}

// The negated comparison deliberately sends a NaN determinant to the error arm.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn saddle_points_with_det(
    angles: &DihedralAngles,
    det_g: f64,
) -> Result<(SaddlePair, f64), VolumeError> {
    if !(det_g < 0.0) {
        return Err(VolumeError::NonHyperbolicGram { det_g });
    }
    let [a, b, c, d, e, f] = angles.as_array();
    let s = libm::sin(a) * libm::sin(d) + libm::sin(b) * libm::sin(e) + libm::sin(c) * libm::sin(f);
    let q = libm::sqrt(-det_g);
    let [ea, eb, ec, ed, ee, ef] =
        angles.as_array().map(|t| Complex64::new(libm::cos(t), libm::sin(t)));
    let den = ea * ed
        + eb * ee
        + ec * ef
        + ea * eb * ef
        + ea * ec * ee
        + eb * ec * ed
        + ed * ee * ef
        + ea * eb * ec * ed * ee * ef;
    let modulus = den.norm();
    if modulus <= DENOMINATOR_EPS {
        return Err(VolumeError::DegenerateDenominator { modulus });
    }
    let z1 = -2.0 * Complex64::new(s, q) / den;
    let z2 = -2.0 * Complex64::new(s, -q) / den;
    Ok((SaddlePair { z1, z2 }, q))
}

fn min_cut_distance(z: Complex64, angles: &[f64; 6]) -> f64 {
    let (pos, neg) = term_multipliers(angles);
    let mut d = f64::INFINITY;
    for w in pos.iter().chain(neg.iter()) {
        let cand = li2_cut_distance(w * z);
        if cand < d {
            d = cand;
        }
    }
    d
}

/// Volume of the generalized tetrahedron with the given dihedral angles.
///
/// Validates realizability, evaluates `U` at both saddles, and returns the
/// oriented bracket `Im(U(z2) - U(z1)) / 2`. Warnings flag dilogarithm
/// arguments within [`CUT_WARNING_DISTANCE`] of the branch cut (expected
/// for shapes with ideal vertices, where one saddle sits at the branch
/// point `z = 1`) and the defensive absolute-value fallback.
pub fn tetra_volume(angles: &DihedralAngles) -> Result<VolumeResult, VolumeError> {
    let gram = validate_angles(angles, DEFAULT_EPS)?;
    let det_g = gram.determinant();
    let (saddles, _q) = saddle_points_with_det(angles, det_g)?;

    let raw = angles.as_array();
    let mut warnings = Vec::new();
    for (which, z) in [(1u8, saddles.z1), (2u8, saddles.z2)] {
        let d = min_cut_distance(z, &raw);
        if d < CUT_WARNING_DISTANCE {
            warnings.push(VolumeWarning::CutProximity { which, distance: d });
        }
    }

    let u1 = u_function(saddles.z1, angles);
    let u2 = u_function(saddles.z2, angles);
    let oriented = 0.5 * (u2.im - u1.im);
    let volume = if oriented < 0.0 {
        warnings.push(VolumeWarning::NegativeBracket { value: oriented });
        -oriented
    } else {
        oriented
    };

    Ok(VolumeResult {
        volume,
        saddles,
        u1,
        u2,
        det_g,
        warnings,
    })
}

/// Analytic gradient of the volume with respect to the six angles:
/// `dVol/dtheta_k = -l_k / 2` (the Schläfli differential formula), with
/// `l_k` from the cofactor closed form.
///
/// Fails with [`VolumeError::IdealVertex`] if any vertex is ideal, since
/// the adjacent edge lengths (hence gradient entries) are infinite.
pub fn schlafli_gradient(angles: &DihedralAngles) -> Result<[f64; 6], VolumeError> {
    let shape = TetrahedronShape::realize(angles)?;
    if let Some(vertex) = (0..4).find(|&i| shape.classification().class(i) == VertexClass::Ideal)
    {
        return Err(VolumeError::IdealVertex { vertex });
    }
    let mut grad = [0.0; 6];
    for label in AngleLabel::ALL {
        grad[label.index()] = -0.5 * shape.edge_length(label).value();
    }
    Ok(grad)
}

/// Central-difference residuals of the Schläfli identity: per coordinate,
/// `(V(theta_k + h) - V(theta_k - h)) / (2h) - (-l_k / 2)`.
///
/// Near-zero residuals (O(h^2) truncation) confirm both the volume formula
/// and the edge-length formula simultaneously, since they are computed by
/// entirely separate code paths.
pub fn schlafli_residual(angles: &DihedralAngles, h: f64) -> Result<[f64; 6], VolumeError> {
    let grad = schlafli_gradient(angles)?;
    let base = angles.as_array();
    let mut residuals = [0.0; 6];
    for label in AngleLabel::ALL {
        let k = label.index();
        let mut plus = base;
        let mut minus = base;
        plus[k] += h;
        minus[k] -= h;
        let vp = step_volume(plus).ok_or(VolumeError::StepOutsideValidity { label })?;
        let vm = step_volume(minus).ok_or(VolumeError::StepOutsideValidity { label })?;
        residuals[k] = (vp - vm) / (2.0 * h) - grad[k];
    }
    Ok(residuals)
}

fn step_volume(angles: [f64; 6]) -> Option<f64> {
    let angles = DihedralAngles::new(angles).ok()?;
    tetra_volume(&angles).ok().map(|r| r.volume())
}

/// Saddle-point verification data for one angle set.
///
/// `U` is evaluated on the principal dilogarithm branch, under which the
/// stationarity sum `sum_j s_j Log(1 - w_j z)` at a saddle equals `2 pi i k`
/// for an integer branch index `k` (generically ±1) rather than 0. The
/// derivative check therefore applies the analytic-continuation correction:
/// residual = |FD(U)(z0) + i pi k / z0|, where FD is a fourth-order central
/// difference. The quadratic residual checks the closed-form saddle
/// equation `prod (1 - w_j^+ z) = prod (1 - w_j^- z)` directly; it is exact
/// even where the derivative is unusable (e.g. a saddle at the branch point
/// `z = 1`, which occurs for ideal regular shapes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleCheck {
    /// Branch-corrected |dU/dz| at (z1, z2).
    pub derivative: [f64; 2],
    /// Relative residual of the product-form saddle equation at (z1, z2).
    pub quadratic: [f64; 2],
    /// Branch index k at (z1, z2).
    pub branch_index: [i32; 2],
}

/// Runs the saddle verification at both saddle points.
pub fn saddle_check(angles: &DihedralAngles) -> Result<SaddleCheck, VolumeError> {
    let saddles = saddle_points(angles)?;
    let raw = angles.as_array();
    let mut derivative = [0.0; 2];
    let mut quadratic = [0.0; 2];
    let mut branch_index = [0i32; 2];
    for (slot, z0) in [(0usize, saddles.z1), (1usize, saddles.z2)] {
        let (k, corrected) = corrected_derivative(z0, &raw);
        derivative[slot] = corrected;
        branch_index[slot] = k;
        quadratic[slot] = product_residual(z0, &raw);
    }
    Ok(SaddleCheck {
        derivative,
        quadratic,
        branch_index,
    })
}

/// Relative residual of the product-form stationarity equation
/// `prod_j (1 - w_j^+ z) = prod_j (1 - w_j^- z)` (positive-sign multipliers
/// on the left, negative-sign ones on the right), normalized by the sum of
/// the two products' magnitude bounds.
pub fn product_residual(z: Complex64, angles: &[f64; 6]) -> f64 {
    let (pos, neg) = term_multipliers(angles);
    let one = Complex64::new(1.0, 0.0);
    let mut p_pos = one;
    let mut p_neg = one;
    let mut bound_pos = 1.0;
    let mut bound_neg = 1.0;
    for w in pos {
        p_pos *= one - w * z;
        bound_pos *= 1.0 + (w * z).norm();
    }
    for w in neg {
        p_neg *= one - w * z;
        bound_neg *= 1.0 + (w * z).norm();
    }
    (p_pos - p_neg).norm() / (bound_pos + bound_neg)
}

fn corrected_derivative(z0: Complex64, angles: &[f64; 6]) -> (i32, f64) {
    let (pos, neg) = term_multipliers(angles);
    let one = Complex64::new(1.0, 0.0);
    // Principal-branch stationarity sum; its imaginary part is 2 pi k.
    let mut log_sum = Complex64::new(0.0, 0.0);
    for w in pos {
        log_sum += (one - w * z0).ln();
    }
    for w in neg {
        log_sum -= (one - w * z0).ln();
    }
    let k = libm::round(log_sum.im / (2.0 * PI)) as i32;

    // Step small enough that the stencil stays within the current branch
    // region (all argument trajectories move parallel to the real axis, so
    // they cannot cross the cut; the bound keeps truncation error small
    // even when an argument sits close to the branch point).
    let d = min_cut_distance(z0, angles);
    let h = libm::fmin(1e-4, libm::fmax(1e-8, d / 100.0));
    let u = |z: Complex64| u_function_signed(z, angles);
    let fd = (-u(z0 + 2.0 * h) + 8.0 * u(z0 + h) - 8.0 * u(z0 - h) + u(z0 - 2.0 * h))
        / Complex64::new(12.0 * h, 0.0);
    let correction = Complex64::new(0.0, PI * f64::from(k)) / z0;
    (k, (fd + correction).norm())
}
