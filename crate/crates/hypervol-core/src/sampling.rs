//! Seeded random angle-set generators for property suites.
//!
//! Two samplers cover the two regimes the verification suites need:
//! arbitrary valid shapes (any mix of vertex classes) and compact shapes
//! (all vertices finite, with margins that keep finite-difference stencils
//! inside the validity region). Both are rejection samplers over boxes
//! chosen so the acceptance rate stays high, and both draw from a
//! counter-free ChaCha stream so results are reproducible from a single
//! `u64` seed on any platform.

use rand_core::RngCore;

use crate::shape::{classification_tolerance, validate_angles, DihedralAngles, DEFAULT_EPS};

pub use rand_chacha::ChaCha8Rng;

/// Box for [`sample_valid`]: angles below ~1.55 rad with a small floor.
///
/// The floor keeps angle recovery well-conditioned (arccos loses half the
/// significant digits right at 0), and the cap stays under the empirical
/// validity ceiling; the acceptance rate over this box is above 90%.
pub const VALID_BOX: (f64, f64) = (0.02, 1.55);

/// Margin for [`sample_compact`]: lower bounds on `-det G` and on each
/// diagonal cofactor, keeping shapes away from the Euclidean-degeneration
/// and ideal-vertex boundaries.
pub const COMPACT_MARGIN: f64 = 1e-2;

/// Uniform `f64` in `[0, 1)` with 53 random bits.
pub fn unit_uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn uniform_in<R: RngCore>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit_uniform(rng)
}

/// Draws a uniformly random realizable angle set from [`VALID_BOX`].
///
/// # Panics
/// After 100,000 consecutive rejections, which the acceptance rate makes
/// unreachable in practice.
pub fn sample_valid<R: RngCore>(rng: &mut R) -> DihedralAngles {
    for _ in 0..100_000 {
        let angles = core::array::from_fn(|_| uniform_in(rng, VALID_BOX.0, VALID_BOX.1));
        let Ok(angles) = DihedralAngles::new(angles) else {
            continue;
        };
        if validate_angles(&angles, DEFAULT_EPS).is_ok() {
            return angles;
        }
    }
    panic!("valid-angle sampler exceeded its rejection budget");
}

/// Draws a random compact shape: realizable, every vertex finite, and with
/// [`COMPACT_MARGIN`] slack in both `-det G` and the diagonal cofactors so
/// that small angle perturbations (finite-difference steps) stay valid.
///
/// The box brackets the regular family between its ideal point (pi/3) and
/// its Euclidean limit (arccos(1/3)), where compact shapes concentrate.
///
/// # Panics
/// After 100,000 consecutive rejections (acceptance is ~30%).
pub fn sample_compact<R: RngCore>(rng: &mut R) -> DihedralAngles {
    let lo = core::f64::consts::FRAC_PI_3 - 0.15;
    let hi = libm::acos(1.0 / 3.0) + 0.02;
    for _ in 0..100_000 {
        let angles = core::array::from_fn(|_| uniform_in(rng, lo, hi));
        let Ok(angles) = DihedralAngles::new(angles) else {
            continue;
        };
        let Ok(gram) = validate_angles(&angles, DEFAULT_EPS) else {
            continue;
        };
        let det_g = gram.determinant();
        if -det_g < COMPACT_MARGIN {
            continue;
        }
        let tol = classification_tolerance(det_g);
        let scale = if tol > COMPACT_MARGIN { tol } else { COMPACT_MARGIN };
        if (0..4).all(|i| gram.cofactor(i, i) > scale) {
            return angles;
        }
    }
    panic!("compact-angle sampler exceeded its rejection budget");
}
