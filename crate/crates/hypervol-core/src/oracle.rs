//! Independent Monte-Carlo volume estimator in the Beltrami–Klein model.
//!
//! A realized tetrahedron becomes a system of linear half-space constraints
//! on the projective ball: four facet half-spaces plus one polar truncation
//! half-space per ultraideal vertex. Uniform proposals in a bounding box,
//! weighted by the Klein volume density `(1 - |x|^2)^{-2}`, give an
//! unbiased estimate of the hyperbolic volume that shares no code with the
//! dilogarithm formula — which is the point: the two agree only if both
//! are right.
//!
//! Sampling is split into fixed-size chunks, each drawing from its own
//! ChaCha stream derived from `(seed, chunk index)`. Chunk results are
//! folded in index order, so the estimate is a pure function of
//! `(seed, samples)` no matter how many threads produced the chunks.

use alloc::vec::Vec;
use rand_core::{RngCore, SeedableRng};

use crate::lorentz::LorentzVector;
use crate::sampling::unit_uniform;
use crate::shape::{TetrahedronShape, VertexClass};

pub use rand_chacha::ChaCha8Rng;

/// Samples per chunk; one chunk is the unit of parallel work.
pub const MC_CHUNK: u64 = 1 << 20;

/// Minimum trials before an all-rejected run is reported as an empty region.
pub const MIN_TRIALS_FOR_EMPTY: u64 = 10_000;

/// A closed half-space `{x : <x, normal> <= 0}` in Minkowski coordinates,
/// with a unit spacelike normal.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    normal: LorentzVector,
}

impl HalfSpace {
    /// Validates that the normal is unit spacelike within 1e-9.
    pub fn new(normal: LorentzVector) -> Result<Self, OracleError> {
        let norm = normal
            .inner(&normal)
            .expect("norm of a vector against itself");
        if libm::fabs(norm - 1.0) > 1e-9 {
            return Err(OracleError::NonUnitNormal { norm });
        }
        Ok(Self { normal })
    }

    /// The defining unit normal.
    pub fn normal(&self) -> &LorentzVector {
        &self.normal
    }

    /// Signed evaluation at the Klein point `x` (lifted to `(1, x)`):
    /// nonpositive inside the half-space.
    pub fn evaluate_klein(&self, x: [f64; 3]) -> f64 {
        let n = self.normal.coords();
        -n[0] + n[1] * x[0] + n[2] * x[1] + n[3] * x[2]
    }
}

/// The constraint system of one shape: facet half-spaces first, then polar
/// truncation half-spaces for the ultraideal vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpaceSystem {
    facets: Vec<HalfSpace>,
    truncations: Vec<HalfSpace>,
}

impl HalfSpaceSystem {
    /// Builds the system from explicit half-spaces.
    pub fn new(facets: Vec<HalfSpace>, truncations: Vec<HalfSpace>) -> Self {
        Self { facets, truncations }
    }

    /// Derives the system from a realized shape: the four facet normals,
    /// plus the lift of each ultraideal vertex as truncation normal. The
    /// lift itself is the correct orientation: `<v_j, v_i> < 0` places
    /// every other vertex (hence the simplex) inside `<x, v_i> <= 0`, and
    /// `<v_i, u_j> = 0` makes the truncation plane perpendicular to its
    /// three adjacent facets.
    pub fn from_shape(shape: &TetrahedronShape) -> Result<Self, OracleError> {
        let mut facets = Vec::with_capacity(4);
        for i in 0..4 {
            facets.push(HalfSpace::new(shape.normal(i).clone())?);
        }
        let mut truncations = Vec::new();
        for i in 0..4 {
            if shape.classification().class(i) == VertexClass::Ultraideal {
                truncations.push(HalfSpace::new(shape.vertex(i).clone())?);
            }
        }
        Ok(Self { facets, truncations })
    }

    /// Facet half-spaces.
    pub fn facets(&self) -> &[HalfSpace] {
        &self.facets
    }

    /// Truncation half-spaces (one per ultraideal vertex).
    pub fn truncations(&self) -> &[HalfSpace] {
        &self.truncations
    }

    /// All half-spaces, facets first.
    pub fn all(&self) -> impl Iterator<Item = &HalfSpace> {
        self.facets.iter().chain(self.truncations.iter())
    }

    /// Number of constraints.
    pub fn len(&self) -> usize {
        self.facets.len() + self.truncations.len()
    }

    /// True when the system has no constraints.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Membership test for a Klein point, with `tol` slack per constraint.
    pub fn contains_klein(&self, x: [f64; 3], tol: f64) -> bool {
        self.all().all(|h| h.evaluate_klein(x) <= tol)
    }

    /// Vertices of the constraint region in the closed unit ball: feasible
    /// intersection points of every triple of constraint planes. For a
    /// realized shape these are the finite vertices plus the corners of the
    /// truncation polygons (and any ideal vertices, which lie on the
    /// sphere itself).
    pub fn region_vertices(&self) -> Vec<[f64; 3]> {
        let planes: Vec<&HalfSpace> = self.all().collect();
        let m = planes.len();
        let mut vertices = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                for k in (j + 1)..m {
                    let Some(x) = solve_plane_triple(planes[i], planes[j], planes[k]) else {
                        continue;
                    };
                    let rho2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                    if rho2 <= 1.0 + 1e-9 && self.contains_klein(x, 1e-9) {
                        vertices.push(x);
                    }
                }
            }
        }
        vertices
    }
}

/// Solves `n_spatial . x = n_0` for three planes; `None` if (nearly)
/// singular.
fn solve_plane_triple(a: &HalfSpace, b: &HalfSpace, c: &HalfSpace) -> Option<[f64; 3]> {
    let row = |h: &HalfSpace| {
        let n = h.normal().coords();
        ([n[1], n[2], n[3]], n[0])
    };
    let (r0, b0) = row(a);
    let (r1, b1) = row(b);
    let (r2, b2) = row(c);
    let det = r0[0] * (r1[1] * r2[2] - r1[2] * r2[1])
        - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
    let scale = [r0, r1, r2]
        .iter()
        .map(|r| libm::fabs(r[0]) + libm::fabs(r[1]) + libm::fabs(r[2]))
        .fold(1.0f64, f64::max);
    if libm::fabs(det) <= 1e-12 * scale * scale * scale {
        return None;
    }
    // Cramer's rule.
    let dx = b0 * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (b1 * r2[2] - r1[2] * b2)
        + r0[2] * (b1 * r2[1] - r1[1] * b2);
    let dy = r0[0] * (b1 * r2[2] - r1[2] * b2) - b0 * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * b2 - b1 * r2[0]);
    let dz = r0[0] * (r1[1] * b2 - b1 * r2[1]) - r0[1] * (r1[0] * b2 - b1 * r2[0])
        + b0 * (r1[0] * r2[1] - r1[1] * r2[0]);
    Some([dx / det, dy / det, dz / det])
}

/// Precomputed sampling geometry: the proposal box, its Euclidean volume,
/// and the squared radius cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McPlan {
    lo: [f64; 3],
    hi: [f64; 3],
    box_volume: f64,
    rho2_max: f64,
}

impl McPlan {
    /// Derives the plan from the region's vertices: the axis-aligned
    /// bounding box (the region is their convex hull) with a roundoff
    /// margin, and the density cap radius `min(r_max, 1)`.
    pub fn new(system: &HalfSpaceSystem, r_max: f64) -> Result<Self, OracleError> {
        let vertices = system.region_vertices();
        if vertices.is_empty() {
            return Err(OracleError::EmptyRegion);
        }
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in &vertices {
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        let margin = 1e-6;
        let mut box_volume = 1.0;
        for k in 0..3 {
            lo[k] -= margin;
            hi[k] += margin;
            box_volume *= hi[k] - lo[k];
        }
        let r_cap = libm::fmin(r_max, 1.0);
        Ok(Self {
            lo,
            hi,
            box_volume,
            rho2_max: r_cap * r_cap * (1.0 - 1e-12),
        })
    }

    /// Lower box corner.
    pub fn lower(&self) -> [f64; 3] {
        self.lo
    }

    /// Upper box corner.
    pub fn upper(&self) -> [f64; 3] {
        self.hi
    }

    /// Euclidean volume of the proposal box.
    pub fn box_volume(&self) -> f64 {
        self.box_volume
    }

    /// Draws one proposal point uniformly from the box.
    pub fn draw<R: RngCore>(&self, rng: &mut R) -> [f64; 3] {
        core::array::from_fn(|k| self.lo[k] + (self.hi[k] - self.lo[k]) * unit_uniform(rng))
    }

    /// Klein density weight of an accepted point: `(1 - |x|^2)^{-2}` if
    /// `x` lies in the region and under the radius cap, else `None`.
    pub fn accept_weight(&self, system: &HalfSpaceSystem, x: [f64; 3]) -> Option<f64> {
        let rho2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        if rho2 > self.rho2_max || !system.contains_klein(x, 0.0) {
            return None;
        }
        let t = 1.0 - rho2;
        Some(1.0 / (t * t))
    }
}

/// Accumulated result of one sampling chunk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McChunk {
    /// Chunk index (selects the ChaCha stream).
    pub index: u64,
    /// Proposals drawn in this chunk.
    pub count: u64,
    /// Sum of accepted weights.
    pub sum_w: f64,
    /// Sum of squared accepted weights.
    pub sum_w2: f64,
    /// Accepted proposals.
    pub accepted: u64,
}

/// Runs one chunk: `count` proposals from the stream `(seed, index)`.
pub fn run_chunk(
    system: &HalfSpaceSystem,
    plan: &McPlan,
    seed: u64,
    index: u64,
    count: u64,
) -> McChunk {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut sum_w = 0.0;
    let mut sum_w2 = 0.0;
    let mut accepted = 0;
    for _ in 0..count {
        let x = plan.draw(&mut rng);
        if let Some(w) = plan.accept_weight(system, x) {
            sum_w += w;
            sum_w2 += w * w;
            accepted += 1;
        }
    }
    McChunk {
        index,
        count,
        sum_w,
        sum_w2,
        accepted,
    }
}

/// The number of chunks covering `samples` proposals.
pub fn chunk_count(samples: u64) -> u64 {
    samples.div_ceil(MC_CHUNK)
}

/// Proposals in chunk `index` out of `samples` total.
pub fn chunk_len(samples: u64, index: u64) -> u64 {
    let start = index * MC_CHUNK;
    MC_CHUNK.min(samples.saturating_sub(start))
}

/// Monte-Carlo volume estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    /// Estimated hyperbolic volume.
    pub volume: f64,
    /// Standard error of the estimate.
    pub std_error: f64,
    /// Total proposals.
    pub samples: u64,
    /// Seed the streams were derived from.
    pub seed: u64,
    /// Accepted proposals.
    pub accepted: u64,
}

/// Folds chunk results (sorted by index) into the final estimate.
///
/// The chunks must cover `samples` proposals exactly; they may have been
/// computed in any order or on any number of threads.
pub fn combine_chunks(
    plan: &McPlan,
    seed: u64,
    samples: u64,
    chunks: &mut [McChunk],
) -> Result<McEstimate, OracleError> {
    chunks.sort_by_key(|c| c.index);
    let mut sum_w = 0.0;
    let mut sum_w2 = 0.0;
    let mut accepted = 0;
    let mut counted = 0;
    for c in chunks.iter() {
        sum_w += c.sum_w;
        sum_w2 += c.sum_w2;
        accepted += c.accepted;
        counted += c.count;
    }
    debug_assert_eq!(counted, samples, "chunks must cover the sample budget");
    if accepted == 0 && samples >= MIN_TRIALS_FOR_EMPTY {
        return Err(OracleError::EmptyRegion);
    }
    let n = samples as f64;
    let mean = sum_w / n;
    let var = (sum_w2 / n - mean * mean).max(0.0);
    Ok(McEstimate {
        volume: plan.box_volume() * mean,
        std_error: plan.box_volume() * libm::sqrt(var / n),
        samples,
        seed,
        accepted,
    })
}

/// Sequential reference estimator: all chunks in index order.
///
/// `r_max` caps the sampling radius (pass 1.0 to sample the whole ball);
/// the estimate is deterministic in `(seed, samples)`.
pub fn mc_volume(
    system: &HalfSpaceSystem,
    samples: u64,
    seed: u64,
    r_max: f64,
) -> Result<McEstimate, OracleError> {
    let plan = McPlan::new(system, r_max)?;
    let mut chunks: Vec<McChunk> = (0..chunk_count(samples))
        .map(|i| run_chunk(system, &plan, seed, i, chunk_len(samples, i)))
        .collect();
    combine_chunks(&plan, seed, samples, &mut chunks)
}

/// Suggested sampling radius for a system: the largest vertex distance
/// from the origin plus a small margin, capped at 1.
pub fn suggested_r_max(system: &HalfSpaceSystem) -> Result<f64, OracleError> {
    let vertices = system.region_vertices();
    if vertices.is_empty() {
        return Err(OracleError::EmptyRegion);
    }
    let max_r = vertices
        .iter()
        .map(|v| libm::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]))
        .fold(0.0f64, f64::max);
    Ok(libm::fmin(max_r + 1e-6, 1.0))
}

/// Failures of the Monte-Carlo oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleError {
    /// The constraint region is empty (no feasible plane-triple vertex, or
    /// zero acceptance after the minimum trial budget).
    EmptyRegion,
    /// A half-space normal is not unit spacelike.
    NonUnitNormal { norm: f64 },
}

impl core::fmt::Display for OracleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::EmptyRegion => write!(f, "constraint region is empty"),
            Self::NonUnitNormal { norm } => {
                write!(f, "half-space normal has Minkowski norm {norm}, expected 1")
            }
        }
    }
}

impl core::error::Error for OracleError {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::DihedralAngles;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn shape(angles: [f64; 6]) -> TetrahedronShape {
        TetrahedronShape::realize(&DihedralAngles::new(angles).unwrap()).unwrap()
    }

    fn spacelike(coords: [f64; 4]) -> HalfSpace {
        HalfSpace::new(LorentzVector::new(coords.to_vec())).unwrap()
    }

    #[test]
    fn halfspace_rejects_non_unit_normals() {
        let err = HalfSpace::new(LorentzVector::new(vec![1.0, 0.0, 0.0, 0.0])).unwrap_err();
        assert!(matches!(err, OracleError::NonUnitNormal { .. }));
    }

    #[test]
    fn truncation_planes_only_for_ultraideal_vertices() {
        let compact = HalfSpaceSystem::from_shape(&shape([1.1; 6])).unwrap();
        assert_eq!(compact.facets().len(), 4);
        assert_eq!(compact.truncations().len(), 0);

        let ideal = HalfSpaceSystem::from_shape(&shape([core::f64::consts::FRAC_PI_3; 6]))
            .unwrap();
        assert_eq!(ideal.truncations().len(), 0);

        let octa = HalfSpaceSystem::from_shape(&shape([0.0; 6])).unwrap();
        assert_eq!(octa.truncations().len(), 4);
        assert_eq!(octa.len(), 8);

        let mixed =
            HalfSpaceSystem::from_shape(&shape([1.2, 1.2, 1.2, 0.3, 0.3, 0.3])).unwrap();
        assert_eq!(mixed.truncations().len(), 3);
    }

    #[test]
    fn truncation_planes_are_perpendicular_to_adjacent_facets() {
        // <v_i, u_j> = 0 for j != i means the polar plane meets the three
        // adjacent facet planes at right angles.
        let s = shape([0.0; 6]);
        let system = HalfSpaceSystem::from_shape(&s).unwrap();
        for (t, i) in system.truncations().iter().zip(0..4) {
            for j in 0..4 {
                if j != i {
                    let inner = t.normal().inner(s.normal(j)).unwrap();
                    assert_abs_diff_eq!(inner, 0.0, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn region_vertices_match_finite_vertices_for_compact_shapes() {
        let s = shape([1.1; 6]);
        let system = HalfSpaceSystem::from_shape(&s).unwrap();
        let verts = system.region_vertices();
        assert_eq!(verts.len(), 4);
        // Each region vertex is the Klein projection of a shape vertex.
        for i in 0..4 {
            let v = s.vertex(i);
            let p = [
                v.coords()[1] / v.x0(),
                v.coords()[2] / v.x0(),
                v.coords()[3] / v.x0(),
            ];
            let hit = verts.iter().any(|w| {
                (w[0] - p[0]).abs() < 1e-8
                    && (w[1] - p[1]).abs() < 1e-8
                    && (w[2] - p[2]).abs() < 1e-8
            });
            assert!(hit, "missing projected vertex {i}");
        }
    }

    #[test]
    fn truncated_octahedron_region_has_twelve_corners_inside_ball() {
        // Truncating all four ultraideal vertices leaves 3 corners per
        // truncation triangle; the corners pair up on the six former edge
        // midpoints, which here are ideal points on the sphere.
        let system = HalfSpaceSystem::from_shape(&shape([0.0; 6])).unwrap();
        let verts = system.region_vertices();
        assert!(!verts.is_empty());
        for v in &verts {
            let rho = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            assert!(rho <= 1.0 + 1e-9, "vertex outside ball: {v:?}");
        }
    }

    #[test]
    fn accepted_points_satisfy_all_constraints() {
        let s = shape([1.2, 1.2, 1.2, 0.3, 0.3, 0.3]);
        let system = HalfSpaceSystem::from_shape(&s).unwrap();
        let plan = McPlan::new(&system, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut accepted = 0;
        for _ in 0..20_000 {
            let x = plan.draw(&mut rng);
            if let Some(w) = plan.accept_weight(&system, x) {
                accepted += 1;
                assert!(system.contains_klein(x, 0.0));
                let rho2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                assert!(rho2 < 1.0);
                assert!(w >= 1.0);
            }
        }
        assert!(accepted > 0);
    }

    #[test]
    fn estimates_are_deterministic_and_partition_independent() {
        let system = HalfSpaceSystem::from_shape(&shape([1.1; 6])).unwrap();
        let a = mc_volume(&system, 300_000, 9, 1.0).unwrap();
        let b = mc_volume(&system, 300_000, 9, 1.0).unwrap();
        assert_eq!(a, b);

        // Reproduce the estimate from chunks computed out of order.
        let plan = McPlan::new(&system, 1.0).unwrap();
        let samples = 300_000u64;
        let mut chunks: Vec<McChunk> = (0..chunk_count(samples))
            .rev()
            .map(|i| run_chunk(&system, &plan, 9, i, chunk_len(samples, i)))
            .collect();
        let c = combine_chunks(&plan, 9, samples, &mut chunks).unwrap();
        assert_eq!(a, c);

        let other_seed = mc_volume(&system, 300_000, 10, 1.0).unwrap();
        assert_ne!(a.volume, other_seed.volume);
    }

    #[test]
    fn std_error_shrinks_like_inverse_sqrt() {
        let system = HalfSpaceSystem::from_shape(&shape([1.1; 6])).unwrap();
        let small = mc_volume(&system, 100_000, 11, 1.0).unwrap();
        let large = mc_volume(&system, 200_000, 11, 1.0).unwrap();
        let ratio = large.std_error / small.std_error;
        let expected = 1.0 / libm::sqrt(2.0);
        assert!(
            (ratio - expected).abs() < 0.2 * expected,
            "ratio {ratio}, expected {expected}"
        );
    }

    #[test]
    fn empty_region_is_reported() {
        // x <= -sqrt(3)/2 and x >= +sqrt(3)/2 cannot both hold.
        let s3 = libm::sqrt(3.0);
        let system = HalfSpaceSystem::new(
            vec![
                spacelike([-s3, 2.0, 0.0, 0.0]),
                spacelike([-s3, -2.0, 0.0, 0.0]),
                spacelike([0.0, 0.0, 1.0, 0.0]),
                spacelike([0.0, 0.0, 0.0, 1.0]),
            ],
            vec![],
        );
        assert!(matches!(
            McPlan::new(&system, 1.0),
            Err(OracleError::EmptyRegion)
        ));
    }

    #[test]
    fn coordinate_permutation_preserves_the_estimate_statistically() {
        // Relabeling spatial axes is a Klein-model isometry; the region is
        // congruent, so the estimates must agree within combined errors.
        let s = shape([1.1; 6]);
        let base = HalfSpaceSystem::from_shape(&s).unwrap();
        let permuted = HalfSpaceSystem::new(
            base.facets()
                .iter()
                .map(|h| {
                    let n = h.normal().coords();
                    spacelike([n[0], n[2], n[3], n[1]])
                })
                .collect(),
            vec![],
        );
        let a = mc_volume(&base, 400_000, 21, 1.0).unwrap();
        let b = mc_volume(&permuted, 400_000, 22, 1.0).unwrap();
        let combined = libm::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
        assert!(
            (a.volume - b.volume).abs() <= 3.0 * combined,
            "estimates {} vs {} with combined error {combined}",
            a.volume,
            b.volume
        );
    }

    #[test]
    fn estimate_matches_formula_for_compact_shape() {
        // Reference volume 0.48689736441146886 (30-digit saddle formula).
        let system = HalfSpaceSystem::from_shape(&shape([1.1; 6])).unwrap();
        let r_max = suggested_r_max(&system).unwrap();
        assert!(r_max < 1.0);
        let est = mc_volume(&system, 400_000, 1, r_max).unwrap();
        let want = 0.48689736441146886;
        let z = (est.volume - want) / est.std_error;
        assert!(z.abs() <= 4.0, "z = {z}, est {est:?}");
        assert!((est.volume - want).abs() / want < 0.02);
    }
}
