//! Acceptance gate: one test per published claim, each printing a single
//! pass line with the measured numbers (run with `--nocapture` to see them).
//!
//! The anchors are the two closed-form values from the literature — the
//! ideal right-angled octahedron `8 Lambda(pi/4)` and the regular ideal
//! tetrahedron `3 Lambda(pi/3)` — plus property sweeps (saddle derivative,
//! Schlafli differential, Jacobi identity, realization round trip,
//! octahedral maximality), the Monte-Carlo cross-check, and the
//! regular-family curves.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};
use std::time::{Duration, Instant};

use hypervol::parallel::{mc_volume_parallel, thread_budget};
use hypervol::sweep::regular_sweep;
use hypervol_core::oracle::suggested_r_max;
use hypervol_core::sampling::{sample_compact, sample_valid, ChaCha8Rng};
use hypervol_core::shape::{jacobi_residual, AngleLabel};
use hypervol_core::specfun::{lobachevsky, milnor_ideal_volume};
use hypervol_core::volume::{saddle_check, saddle_points, schlafli_residual, tetra_volume};
use hypervol_core::{
    Complex64, DihedralAngles, HalfSpaceSystem, TetrahedronShape, VertexClass,
};
use rand_core::SeedableRng;

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn assert_budget(elapsed: Duration, budget: Duration, what: &str) {
    assert!(
        elapsed <= budget,
        "{what} took {elapsed:?}, over the {budget:?} budget"
    );
}

#[test]
fn criterion_1_octahedron_value() {
    // Warm the instruction cache so the timing reflects the steady state.
    tetra_volume(&DihedralAngles::uniform(0.0).unwrap()).unwrap();

    let start = Instant::now();
    let vol = tetra_volume(&DihedralAngles::uniform(0.0).unwrap())
        .unwrap()
        .volume();
    let elapsed = start.elapsed();

    let reference = 8.0 * lobachevsky(FRAC_PI_4);
    let diff = (vol - reference).abs();
    assert!(diff <= 1e-9, "|{vol} - {reference}| = {diff:e}");
    assert!((vol - 3.66386).abs() < 5e-6);
    assert_budget(elapsed, Duration::from_millis(1), "tetra_volume(0 x6)");
    println!(
        "criterion 1: PASS - octahedron {vol} vs 8*Lambda(pi/4) = {reference} \
         (diff {diff:.2e}, {elapsed:?})"
    );
}

#[test]
fn criterion_2_ideal_regular_tetrahedron() {
    tetra_volume(&DihedralAngles::uniform(FRAC_PI_3).unwrap()).unwrap();

    let start = Instant::now();
    let vol = tetra_volume(&DihedralAngles::uniform(FRAC_PI_3).unwrap())
        .unwrap()
        .volume();
    let elapsed = start.elapsed();

    let reference = milnor_ideal_volume(FRAC_PI_3, FRAC_PI_3, FRAC_PI_3).unwrap();
    let diff = (vol - reference).abs();
    assert!(diff <= 1e-9, "|{vol} - {reference}| = {diff:e}");
    assert_budget(elapsed, Duration::from_millis(1), "tetra_volume(pi/3 x6)");
    println!(
        "criterion 2: PASS - ideal regular {vol} vs 3*Lambda(pi/3) = {reference} \
         (diff {diff:.2e}, {elapsed:?})"
    );
}

#[test]
fn criterion_3_saddle_points() {
    let pair = saddle_points(&DihedralAngles::uniform(0.0).unwrap()).unwrap();
    assert_eq!(pair.z1, Complex64::new(0.0, -1.0));
    assert_eq!(pair.z2, Complex64::new(0.0, 1.0));

    let mut rng = seeded(301);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let angles = sample_valid(&mut rng);
        let check = saddle_check(&angles).unwrap();
        worst = worst.max(check.derivative[0]).max(check.derivative[1]);
    }
    assert!(worst < 1e-7, "max |dU/dz| at a saddle = {worst:e}");
    println!(
        "criterion 3: PASS - saddles (-i, +i) at the octahedron; \
         max |dU/dz| over 100 shapes = {worst:.2e}"
    );
}

#[test]
fn criterion_4_schlafli_differential() {
    let start = Instant::now();
    let mut rng = seeded(401);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let angles = sample_compact(&mut rng);
        let residuals = schlafli_residual(&angles, 1e-5).unwrap();
        worst = worst.max(residuals.into_iter().fold(0.0, f64::max));
    }
    let elapsed = start.elapsed();
    assert!(worst < 1e-6, "max |dV/dtheta + l/2| = {worst:e}");
    assert_budget(elapsed, Duration::from_secs(30), "Schlafli suite");
    println!(
        "criterion 4: PASS - max Schlafli residual over 100 compact shapes \
         (h = 1e-5) = {worst:.2e} ({elapsed:?})"
    );
}

#[test]
fn criterion_5_jacobi_identity() {
    let start = Instant::now();
    let mut rng = seeded(501);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let angles = sample_valid(&mut rng);
        let gram = angles.gram();
        let scale = gram.determinant().abs().max(1.0);
        for label in AngleLabel::ALL {
            worst = worst.max(jacobi_residual(&gram, label) / scale);
        }
    }
    let elapsed = start.elapsed();
    assert!(worst < 1e-10, "max scale-relative Jacobi residual = {worst:e}");
    assert_budget(elapsed, Duration::from_secs(1), "Jacobi suite");
    println!(
        "criterion 5: PASS - max Jacobi residual over 1000 shapes x 6 labels \
         = {worst:.2e} ({elapsed:?})"
    );
}

#[test]
fn criterion_6_realization_round_trip() {
    let start = Instant::now();
    let mut rng = seeded(601);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let angles = sample_valid(&mut rng);
        let shape = TetrahedronShape::realize(&angles).unwrap();
        let recovered = shape.angles_from_normals().unwrap();
        for (a, b) in angles.as_array().iter().zip(recovered.as_array()) {
            worst = worst.max((a - b).abs());
        }
        for i in 0..4 {
            let v = shape.vertex(i);
            let norm = v.inner(v).unwrap();
            let expected = if norm < -0.5 {
                VertexClass::Finite
            } else if norm > 0.5 {
                VertexClass::Ultraideal
            } else {
                VertexClass::Ideal
            };
            assert_eq!(
                shape.classification().class(i),
                expected,
                "vertex {i} of {angles:?}: <v,v> = {norm}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(worst < 1e-9, "max angle reproduction error = {worst:e}");
    assert_budget(elapsed, Duration::from_secs(10), "round-trip suite");
    println!(
        "criterion 6: PASS - max round-trip angle error over 1000 shapes \
         = {worst:.2e}; classifications match <v,v> signs ({elapsed:?})"
    );
}

#[test]
fn criterion_7_octahedral_maximality() {
    let start = Instant::now();
    let vol_max = 8.0 * lobachevsky(FRAC_PI_4);
    let mut rng = seeded(701);
    let mut largest = 0.0f64;
    for _ in 0..100_000 {
        let angles = sample_valid(&mut rng);
        let vol = tetra_volume(&angles).unwrap().volume();
        assert!(
            vol <= vol_max + 1e-9,
            "volume {vol} exceeds the octahedral bound at {angles:?}"
        );
        largest = largest.max(vol);
    }
    let elapsed = start.elapsed();
    assert_budget(elapsed, Duration::from_secs(60), "maximality sweep");
    println!(
        "criterion 7: PASS - largest of 1e5 random volumes {largest} \
         < bound {vol_max} ({elapsed:?})"
    );
}

#[test]
fn criterion_8_monte_carlo_agreement() {
    // One compact representative (the equal-angle family is compact between
    // pi/3 and its Euclidean limit arccos(1/3) ~ 1.2310) and the extreme
    // truncation case: all angles zero, where the domain is the regular
    // ideal octahedron bounded by four facet and four truncation planes.
    let start = Instant::now();
    for (name, theta) in [("compact 1.1 x6", 1.1), ("truncated-octahedron 0 x6", 0.0)] {
        let angles = DihedralAngles::uniform(theta).unwrap();
        let formula = tetra_volume(&angles).unwrap().volume();
        let shape = TetrahedronShape::realize(&angles).unwrap();
        let system = HalfSpaceSystem::from_shape(&shape).unwrap();
        let r_max = suggested_r_max(&system).unwrap();
        let estimate =
            mc_volume_parallel(&system, 10_000_000, 1, r_max, thread_budget()).unwrap();

        let rel = (estimate.volume - formula).abs() / formula;
        let z = (estimate.volume - formula) / estimate.std_error;
        assert!(rel < 0.01, "{name}: relative error {rel:e}");
        assert!(z.abs() <= 4.0, "{name}: z = {z}");
        println!(
            "criterion 8: PASS - {name}: formula {formula}, MC {} +- {} \
             (rel {rel:.2e}, z = {z:.2})",
            estimate.volume, estimate.std_error
        );
    }
    assert_budget(start.elapsed(), Duration::from_secs(120), "oracle runs");
}

#[test]
fn criterion_9_regular_family_curves() {
    let start = Instant::now();
    let rows = regular_sweep(200).unwrap();
    let elapsed = start.elapsed();

    assert_eq!(rows.len(), 200);
    assert!((rows[0].volume - 3.663862).abs() < 1e-6);
    assert!(
        rows.windows(2).all(|w| w[0].volume > w[1].volume),
        "volume column must be strictly decreasing"
    );
    let last = rows.last().unwrap().volume;
    assert!(last > 0.0 && last < 1e-3, "tail volume {last}");

    let ideal: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.vertex_class == VertexClass::Ideal)
        .map(|(k, _)| k)
        .collect();
    assert_eq!(ideal.len(), 1, "exactly one ideal row");
    let k = ideal[0];
    assert_eq!(rows[k].theta, FRAC_PI_3);
    assert!(rows[k].edge_length.is_infinite());
    assert!(rows[..k].iter().all(|r| r.vertex_class == VertexClass::Ultraideal));
    assert!(rows[k + 1..].iter().all(|r| r.vertex_class == VertexClass::Finite));
    assert_budget(elapsed, Duration::from_secs(1), "200-step sweep");
    println!(
        "criterion 9: PASS - 200-step sweep decreasing from {} to {last:.3e}, \
         classes Ultraideal -> Ideal (theta = pi/3) -> Finite ({elapsed:?})",
        rows[0].volume
    );
}
