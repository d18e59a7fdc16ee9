//! Property tests: algebraic identities that must hold on whole input
//! regions, not just at the frozen anchors of the unit suites.
//!
//! The dilogarithm and Lobachevsky implementations are cross-validated
//! against their functional equations and against direct adaptive
//! quadrature; the Gram-matrix machinery against the Laplace cofactor
//! expansion and its eigendecomposition; and the realized shapes against
//! metric identities on the constructed vertices.

use std::f64::consts::{FRAC_PI_2, PI};

use hypervol_core::sampling::{sample_compact, sample_valid, ChaCha8Rng};
use hypervol_core::shape::classification_tolerance;
use hypervol_core::specfun::{li2, lobachevsky, PI_SQUARED_OVER_6};
use hypervol_core::volume::{saddle_points, tetra_volume};
use hypervol_core::{
    Complex64, DihedralAngles, HalfSpaceSystem, TetrahedronShape, VertexClass,
};
use proptest::prelude::*;
use rand_core::SeedableRng;

// ------------------------------------------------------------ dilogarithm

proptest! {
    /// Schwarz reflection: `Li2(conj z) = conj(Li2 z)` away from the cut.
    #[test]
    fn li2_conjugation_symmetry(re in -2.5f64..2.5, im in -2.5f64..2.5) {
        prop_assume!(im.abs() > 1e-9 || re < 1.0 - 1e-9);
        let z = Complex64::new(re, im);
        let direct = li2(z.conj());
        let reflected = li2(z).conj();
        prop_assert!((direct - reflected).norm() < 1e-12,
            "z = {z}: {direct} vs {reflected}");
    }

    /// Euler reflection: `Li2(z) + Li2(1-z) = pi^2/6 - ln(z) ln(1-z)`.
    ///
    /// The two arguments land in different evaluation regions (series,
    /// reflection, Bernoulli series), so this checks their consistency.
    #[test]
    fn li2_euler_reflection(re in 0.05f64..0.95, im in 0.05f64..1.5) {
        let z = Complex64::new(re, im);
        let one_minus = Complex64::new(1.0, 0.0) - z;
        let lhs = li2(z) + li2(one_minus);
        let rhs = Complex64::new(PI_SQUARED_OVER_6, 0.0) - z.ln() * one_minus.ln();
        prop_assert!((lhs - rhs).norm() < 1e-12, "z = {z}: {lhs} vs {rhs}");
    }

    /// Inversion: `Li2(z) + Li2(1/z) = -pi^2/6 - ln(-z)^2 / 2` off the
    /// real axis.
    #[test]
    fn li2_inversion_identity(re in -2.0f64..2.0, im in 0.05f64..2.0) {
        let z = Complex64::new(re, im);
        prop_assume!(z.norm() > 0.3);
        let lhs = li2(z) + li2(z.inv());
        let log_neg = (-z).ln();
        let rhs = -Complex64::new(PI_SQUARED_OVER_6, 0.0) - 0.5 * log_neg * log_neg;
        prop_assert!((lhs - rhs).norm() < 1e-12, "z = {z}: {lhs} vs {rhs}");
    }

    /// The unit-circle boundary values tie `Li2` to the Lobachevsky
    /// function: `Im Li2(e^{2ix}) = 2 Lambda(x)`.
    #[test]
    fn li2_circle_values_match_lobachevsky(x in 0.05f64..1.5) {
        let z = Complex64::new((2.0 * x).cos(), (2.0 * x).sin());
        let diff = (li2(z).im - 2.0 * lobachevsky(x)).abs();
        prop_assert!(diff < 1e-12, "x = {x}: diff {diff:e}");
    }

    /// `Lambda` is odd and pi-periodic.
    #[test]
    fn lobachevsky_odd_and_periodic(x in -8.0f64..8.0) {
        prop_assert!((lobachevsky(-x) + lobachevsky(x)).abs() < 1e-12);
        prop_assert!((lobachevsky(x + PI) - lobachevsky(x)).abs() < 1e-12);
    }

    /// `Lambda(x) = -int_0^x log|2 sin t| dt` against adaptive Simpson
    /// quadrature with an analytic patch over the log singularity at 0.
    #[test]
    fn lobachevsky_matches_quadrature(x in 0.01f64..1.5) {
        let diff = (lobachevsky(x) - lobachevsky_by_quadrature(x)).abs();
        prop_assert!(diff < 1e-10, "x = {x}: diff {diff:e}");
    }
}

/// `-int_0^x log(2 sin t) dt` for `0 < x <= pi/2`, independent of the
/// series implementation: an analytic expansion on `[0, eps]` plus
/// adaptive Simpson on `[eps, x]`.
fn lobachevsky_by_quadrature(x: f64) -> f64 {
    assert!(x > 0.0 && x <= FRAC_PI_2 + 1e-12);
    let eps = 1e-3_f64.min(x / 2.0);
    // -log(2 sin t) = -log(2t) + t^2/6 + t^4/180 + O(t^6).
    let head = eps * (1.0 - (2.0 * eps).ln()) + eps.powi(3) / 18.0 + eps.powi(5) / 900.0;
    head + adaptive_simpson(&|t: f64| -(2.0 * t.sin()).ln(), eps, x, 1e-13, 40)
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, m: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let whole = simpson(f, a, m, b);
    let left = simpson(f, a, 0.5 * (a + m), m);
    let right = simpson(f, m, 0.5 * (m + b), b);
    let refined = left + right;
    if depth == 0 || (refined - whole).abs() < 15.0 * tol {
        refined + (refined - whole) / 15.0
    } else {
        adaptive_simpson(f, a, m, 0.5 * tol, depth - 1)
            + adaptive_simpson(f, m, b, 0.5 * tol, depth - 1)
    }
}

// ------------------------------------------------------- Gram machinery

fn angles6() -> impl Strategy<Value = [f64; 6]> {
    prop::array::uniform6(0.0f64..3.1)
}

proptest! {
    /// Laplace expansion: `sum_k g[i][k] c[j][k] = delta_ij det G`.
    #[test]
    fn gram_cofactor_laplace_identity(raw in angles6()) {
        let gram = DihedralAngles::new(raw).unwrap().gram();
        let det = gram.determinant();
        let cof = gram.cofactor_matrix();
        let tol = 1e-11 * det.abs().max(1.0);
        for i in 0..4 {
            for j in 0..4 {
                let sum: f64 = (0..4).map(|k| gram.get(i, k) * cof[4 * j + k]).sum();
                let expected = if i == j { det } else { 0.0 };
                prop_assert!((sum - expected).abs() < tol,
                    "({i},{j}): {sum} vs {expected}");
            }
        }
    }

    /// The determinant equals the product of the symmetric eigenvalues.
    #[test]
    fn determinant_matches_eigenvalue_product(raw in angles6()) {
        let gram = DihedralAngles::new(raw).unwrap().gram();
        let det = gram.determinant();
        let (eigvals, _) = gram.eigen_symmetric();
        let product: f64 = eigvals.iter().product();
        prop_assert!((det - product).abs() < 1e-11 * det.abs().max(1.0),
            "{det} vs {product}");
    }

    /// Vertex relabelings conjugate the Gram matrix by a permutation, so
    /// determinant and signature are invariant.
    #[test]
    fn signature_is_permutation_invariant(raw in angles6(), perm in 0usize..24) {
        let angles = DihedralAngles::new(raw).unwrap();
        let gram = angles.gram();
        // Skip spectra near zero, where a signature count is ill-posed.
        let (eigvals, _) = gram.eigen_symmetric();
        prop_assume!(eigvals.iter().all(|l| l.abs() > 1e-6));

        let relabeled = angles.permuted(nth_permutation(perm)).gram();
        let a = gram.signature(1e-9);
        let b = relabeled.signature(1e-9);
        prop_assert_eq!(a, b);
        prop_assert!(
            (gram.determinant() - relabeled.determinant()).abs()
                < 1e-10 * gram.determinant().abs().max(1.0)
        );
    }
}

/// The `n`-th permutation of `{0,1,2,3}` in Lehmer-code order.
fn nth_permutation(n: usize) -> [usize; 4] {
    let mut pool = vec![0usize, 1, 2, 3];
    let mut out = [0usize; 4];
    let mut rem = n % 24;
    for (slot, base) in out.iter_mut().zip([6usize, 2, 1, 1]) {
        let idx = rem / base;
        rem %= base;
        *slot = pool.remove(idx);
    }
    out
}

// ------------------------------------------------- realized shape sweeps

#[test]
fn volume_is_invariant_under_all_24_relabelings() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let angles = sample_valid(&mut rng);
        let base = tetra_volume(&angles).unwrap();
        let saddles = saddle_points(&angles).unwrap();
        for n in 0..24 {
            let relabeled = angles.permuted(nth_permutation(n));
            let vol = tetra_volume(&relabeled).unwrap();
            assert!(
                (vol.volume() - base.volume()).abs() < 1e-10,
                "sigma {n} at {angles:?}"
            );
            let s = saddle_points(&relabeled).unwrap();
            assert!((s.z1 - saddles.z1).norm() < 1e-11, "sigma {n}");
            assert!((s.z2 - saddles.z2).norm() < 1e-11, "sigma {n}");
        }
    }
}

#[test]
fn edge_lengths_match_metric_identities_on_random_shapes() {
    // Cofactor closed form vs acosh/asinh of the vertex inner products,
    // dispatched on the endpoint classes (ideal endpoints are infinite and
    // skipped; the samplers never produce them anyway).
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    for _ in 0..300 {
        let angles = sample_valid(&mut rng);
        let shape = TetrahedronShape::realize(&angles).unwrap();
        for edge in shape.edge_lengths() {
            let (r, s) = edge.endpoints();
            let classes = (
                shape.classification().class(r),
                shape.classification().class(s),
            );
            if classes.0 == VertexClass::Ideal || classes.1 == VertexClass::Ideal {
                assert!(edge.value().is_infinite());
                continue;
            }
            let inner = shape.vertex(r).inner(shape.vertex(s)).unwrap();
            let expected = match classes {
                (VertexClass::Finite, VertexClass::Finite) => (-inner).acosh(),
                (VertexClass::Ultraideal, VertexClass::Ultraideal) => inner.abs().acosh(),
                _ => (-inner).asinh(),
            };
            assert!(
                (edge.value() - expected).abs() < 1e-9,
                "edge {} of {angles:?}: {} vs {expected}",
                edge.label(),
                edge.value()
            );
        }
    }
}

#[test]
fn classification_witnesses_are_the_diagonal_cofactors() {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    for _ in 0..200 {
        let angles = sample_valid(&mut rng);
        let shape = TetrahedronShape::realize(&angles).unwrap();
        let tol = classification_tolerance(shape.det_gram());
        for i in 0..4 {
            let c_ii = shape.cofactor(i, i);
            assert_eq!(shape.classification().witness(i), c_ii);
            let expected = if c_ii > tol {
                VertexClass::Finite
            } else if c_ii < -tol {
                VertexClass::Ultraideal
            } else {
                VertexClass::Ideal
            };
            assert_eq!(shape.classification().class(i), expected);
        }
    }
}

#[test]
fn monte_carlo_agrees_on_random_compact_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2027);
    for _ in 0..2 {
        let angles = sample_compact(&mut rng);
        let formula = tetra_volume(&angles).unwrap().volume();
        let shape = TetrahedronShape::realize(&angles).unwrap();
        let system = HalfSpaceSystem::from_shape(&shape).unwrap();
        let r_max = hypervol_core::oracle::suggested_r_max(&system).unwrap();
        let estimate = hypervol_core::oracle::mc_volume(&system, 300_000, 5, r_max).unwrap();
        let z = (estimate.volume - formula) / estimate.std_error;
        assert!(z.abs() < 4.5, "{angles:?}: z = {z}");
    }
}
