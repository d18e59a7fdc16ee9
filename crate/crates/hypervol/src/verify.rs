//! Randomized verification suites behind `hypervol verify`.
//!
//! Five independent suites, each on its own deterministic random stream
//! derived from the user seed:
//!
//! - **schlafli**: the analytic volume gradient is `-l/2` per angle; checked
//!   against central finite differences on compact shapes.
//! - **jacobi**: the cofactor identity
//!   `c_rs^2 - c_rr c_ss = -det G sin^2(theta)` for all six labels.
//! - **round trip**: angles -> realized normals -> angles, plus agreement of
//!   the cofactor-based vertex classification with the sign of `<v, v>`.
//! - **symmetry**: the volume is invariant under the 24 vertex relabelings.
//! - **maximality**: no valid shape exceeds the ideal right-angled
//!   octahedron volume `8 Lambda(pi/4)`.

use hypervol_core::sampling::{sample_compact, sample_valid, ChaCha8Rng};
use hypervol_core::shape::{jacobi_residual, AngleLabel};
use hypervol_core::specfun::lobachevsky;
use hypervol_core::volume::{schlafli_gradient, tetra_volume};
use hypervol_core::{DihedralAngles, TetrahedronShape, VertexClass};
use rand_core::{RngCore, SeedableRng};
use serde_json::{json, Value};
use std::f64::consts::FRAC_PI_4;

use crate::format::csv_f64;

/// Maximum tolerated Schläfli finite-difference residual (`h = 1e-5`).
pub const SCHLAFLI_TOL: f64 = 1e-6;
/// Scale-relative Jacobi residual bound.
pub const JACOBI_TOL: f64 = 1e-10;
/// Per-angle round-trip reproduction bound.
pub const ROUND_TRIP_TOL: f64 = 1e-9;
/// Volume agreement bound across relabelings.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Slack over the octahedral maximum.
pub const MAXIMALITY_TOL: f64 = 1e-9;

/// The five suites, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Schlafli,
    Jacobi,
    RoundTrip,
    Symmetry,
    Maximality,
}

impl Suite {
    /// All suites in reporting order.
    pub const ALL: [Suite; 5] = [
        Suite::Schlafli,
        Suite::Jacobi,
        Suite::RoundTrip,
        Suite::Symmetry,
        Suite::Maximality,
    ];

    /// Stable lower-case name (also the `--inject-fault` key).
    pub fn name(self) -> &'static str {
        match self {
            Suite::Schlafli => "schlafli",
            Suite::Jacobi => "jacobi",
            Suite::RoundTrip => "round-trip",
            Suite::Symmetry => "symmetry",
            Suite::Maximality => "maximality",
        }
    }
}

/// One failed case: the offending input and what went wrong.
#[derive(Debug, Clone)]
pub struct FailureRecord {
    /// The six input angles, radians.
    pub angles: [f64; 6],
    /// Human-readable description of the violation.
    pub detail: String,
}

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    /// Which suite ran.
    pub suite: Suite,
    /// Cases evaluated.
    pub cases: usize,
    /// Largest residual observed (volume difference, angle error, ..).
    pub max_residual: f64,
    /// Tolerance the residuals were held to.
    pub tolerance: f64,
    /// Failing cases (empty on success).
    pub failures: Vec<FailureRecord>,
}

impl SuiteReport {
    /// Whether every case passed.
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Outcome of a full `verify` run.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    /// Cases per suite.
    pub cases: usize,
    /// User seed the streams were derived from.
    pub seed: u64,
    /// Per-suite outcomes.
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    /// Whether every suite passed.
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    /// Human-readable summary table plus failure echoes.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str("suite        cases   max residual   tolerance   result\n");
        for s in &self.suites {
            out.push_str(&format!(
                "{:<12} {:>5}   {:>12}   {:>9}   {}\n",
                s.suite.name(),
                s.cases,
                format!("{:.3e}", s.max_residual),
                format!("{:.0e}", s.tolerance),
                if s.passed() { "pass" } else { "FAIL" },
            ));
            for f in &s.failures {
                let angles: Vec<String> = f.angles.iter().map(|&a| csv_f64(a)).collect();
                out.push_str(&format!(
                    "  FAIL {}: angles = [{}]: {}\n",
                    s.suite.name(),
                    angles.join(", "),
                    f.detail,
                ));
            }
        }
        let total: usize = self.suites.iter().map(|s| s.cases).sum();
        if self.passed() {
            out.push_str(&format!(
                "all suites passed ({total} cases total, {} per suite, seed {})\n",
                self.cases, self.seed
            ));
        } else {
            let failed: usize = self.suites.iter().map(|s| s.failures.len()).sum();
            out.push_str(&format!(
                "{failed} failure(s) across {total} cases (seed {})\n",
                self.seed
            ));
        }
        out
    }

    /// JSON summary.
    pub fn to_json(&self) -> Value {
        json!({
            "cases": self.cases,
            "seed": self.seed,
            "passed": self.passed(),
            "suites": self.suites.iter().map(|s| {
                json!({
                    "name": s.suite.name(),
                    "cases": s.cases,
                    "max_residual": s.max_residual,
                    "tolerance": s.tolerance,
                    "failures": s.failures.iter().map(|f| {
                        json!({"angles": f.angles.to_vec(), "detail": f.detail})
                    }).collect::<Vec<_>>(),
                })
            }).collect::<Vec<_>>(),
        })
    }
}

/// Runs all five suites, `cases` seeded random shapes each.
///
/// `fault` flips the sign of the predicted Schläfli gradient — a stand-in
/// for the classic sign bug in the `-l/2` formula — so the failure-reporting
/// path can be exercised end to end without shipping a broken build.
pub fn run_suites(cases: usize, seed: u64, fault: Option<Suite>) -> VerifyReport {
    let suites = Suite::ALL
        .iter()
        .map(|&suite| {
            // One independent, reproducible stream per suite.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(suite as u64 + 1);
            run_suite(suite, cases, &mut rng, fault == Some(suite))
        })
        .collect();
    VerifyReport {
        cases,
        seed,
        suites,
    }
}

// The negated comparison deliberately records a NaN residual as a failure.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn run_suite(suite: Suite, cases: usize, rng: &mut ChaCha8Rng, fault: bool) -> SuiteReport {
    let tolerance = match suite {
        Suite::Schlafli => SCHLAFLI_TOL,
        Suite::Jacobi => JACOBI_TOL,
        Suite::RoundTrip => ROUND_TRIP_TOL,
        Suite::Symmetry => SYMMETRY_TOL,
        Suite::Maximality => MAXIMALITY_TOL,
    };
    let mut max_residual = 0.0f64;
    let mut failures = Vec::new();
    for _ in 0..cases {
        let (angles, residual, detail) = match suite {
            Suite::Schlafli => schlafli_case(rng, fault),
            Suite::Jacobi => jacobi_case(rng),
            Suite::RoundTrip => round_trip_case(rng),
            Suite::Symmetry => symmetry_case(rng),
            Suite::Maximality => maximality_case(rng),
        };
        max_residual = max_residual.max(residual);
        if !(residual <= tolerance) {
            failures.push(FailureRecord {
                angles: angles.as_array(),
                detail: detail.unwrap_or_else(|| {
                    format!("residual {residual:.3e} exceeds {tolerance:.0e}")
                }),
            });
        }
    }
    SuiteReport {
        suite,
        cases,
        max_residual,
        tolerance,
        failures,
    }
}

/// Central finite differences of the volume against the analytic gradient
/// (`-l/2` per angle, sign-flipped under fault injection).
fn schlafli_case(rng: &mut ChaCha8Rng, fault: bool) -> (DihedralAngles, f64, Option<String>) {
    let h = 1e-5;
    let angles = sample_compact(rng);
    let grad = match schlafli_gradient(&angles) {
        Ok(g) => g,
        Err(e) => return (angles, f64::INFINITY, Some(format!("gradient failed: {e}"))),
    };
    let mut worst = 0.0f64;
    for label in AngleLabel::ALL {
        let step = |delta: f64| -> Result<f64, String> {
            let mut stepped = angles.as_array();
            stepped[label.index()] += delta;
            let stepped =
                DihedralAngles::new(stepped).map_err(|e| format!("step at {label}: {e}"))?;
            tetra_volume(&stepped)
                .map(|r| r.volume())
                .map_err(|e| format!("step at {label}: {e}"))
        };
        let fd = match (step(h), step(-h)) {
            (Ok(up), Ok(down)) => (up - down) / (2.0 * h),
            (Err(e), _) | (_, Err(e)) => return (angles, f64::INFINITY, Some(e)),
        };
        let predicted = if fault {
            -grad[label.index()]
        } else {
            grad[label.index()]
        };
        worst = worst.max((fd - predicted).abs());
    }
    (angles, worst, None)
}

/// Scale-relative residual of the cofactor identity over all six labels.
fn jacobi_case(rng: &mut ChaCha8Rng) -> (DihedralAngles, f64, Option<String>) {
    let angles = sample_valid(rng);
    let gram = angles.gram();
    let scale = gram.determinant().abs().max(1.0);
    let worst = AngleLabel::ALL
        .iter()
        .map(|&label| jacobi_residual(&gram, label) / scale)
        .fold(0.0f64, f64::max);
    (angles, worst, None)
}

/// Angles -> normals -> angles reproduction and classification agreement.
fn round_trip_case(rng: &mut ChaCha8Rng) -> (DihedralAngles, f64, Option<String>) {
    let angles = sample_valid(rng);
    let shape = match TetrahedronShape::realize(&angles) {
        Ok(s) => s,
        Err(e) => return (angles, f64::INFINITY, Some(format!("realize failed: {e}"))),
    };
    let recovered = match shape.angles_from_normals() {
        Ok(a) => a,
        Err(e) => return (angles, f64::INFINITY, Some(format!("recovery failed: {e}"))),
    };
    let mut worst = 0.0f64;
    for (a, b) in angles.as_array().iter().zip(recovered.as_array()) {
        worst = worst.max((a - b).abs());
    }
    // Classification must match the Minkowski norm sign of the built vertex.
    for i in 0..4 {
        let v = shape.vertex(i);
        let norm = v.inner(v).expect("vertices share a dimension");
        let expected = if norm < -0.5 {
            VertexClass::Finite
        } else if norm > 0.5 {
            VertexClass::Ultraideal
        } else {
            VertexClass::Ideal
        };
        let got = shape.classification().class(i);
        if got != expected {
            let detail = format!("vertex {i}: class {got} but <v,v> = {norm}");
            return (angles, f64::INFINITY, Some(detail));
        }
    }
    (angles, worst, None)
}

/// Volume agreement across a random vertex relabeling.
fn symmetry_case(rng: &mut ChaCha8Rng) -> (DihedralAngles, f64, Option<String>) {
    let angles = sample_valid(rng);
    let sigma = random_permutation(rng);
    let base = tetra_volume(&angles);
    let relabeled = tetra_volume(&angles.permuted(sigma));
    match (base, relabeled) {
        (Ok(a), Ok(b)) => (angles, (a.volume() - b.volume()).abs(), None),
        (Err(e), _) | (_, Err(e)) => {
            let detail = format!("volume under sigma = {sigma:?} failed: {e}");
            (angles, f64::INFINITY, Some(detail))
        }
    }
}

/// Positivity and the octahedral upper bound.
fn maximality_case(rng: &mut ChaCha8Rng) -> (DihedralAngles, f64, Option<String>) {
    let vol_max = 8.0 * lobachevsky(FRAC_PI_4);
    let angles = sample_valid(rng);
    match tetra_volume(&angles) {
        Ok(r) if r.volume() > 0.0 => (angles, (r.volume() - vol_max).max(0.0), None),
        Ok(r) => {
            let detail = format!("non-positive volume {}", r.volume());
            (angles, f64::INFINITY, Some(detail))
        }
        Err(e) => (angles, f64::INFINITY, Some(format!("volume failed: {e}"))),
    }
}

/// Uniform random element of the 24 vertex permutations (Fisher-Yates).
fn random_permutation(rng: &mut ChaCha8Rng) -> [usize; 4] {
    let mut sigma = [0usize, 1, 2, 3];
    for i in (1..4).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        sigma.swap(i, j);
    }
    sigma
}
