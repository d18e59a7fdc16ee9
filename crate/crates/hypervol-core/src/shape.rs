//! Realization and classification of generalized hyperbolic tetrahedra.
//!
//! Six dihedral angles determine a Gram matrix; the tetrahedron exists in
//! H^3 (possibly with ultraideal vertices, i.e. mildly truncated) if and
//! only if the Gram matrix has Lorentzian signature (3,1) and all
//! off-diagonal cofactors are positive (Ushijima 2006, Theorem 3.2 of
//! "A volume formula for generalised hyperbolic tetrahedra"). This module
//! decides that, constructs explicit vertex and facet-normal vectors in
//! Minkowski space, classifies vertices as finite / ideal / ultraideal by
//! the sign of the diagonal cofactors, and evaluates edge lengths from the
//! cofactor closed forms.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::lorentz::{GramMatrix, LorentzVector, Signature};

/// Default relative tolerance for signature and classification decisions.
pub const DEFAULT_EPS: f64 = 1e-9;

/// The six dihedral-angle labels. `A`, `B`, `C` sit on the three edges
/// meeting at vertex 3 (the vertex opposite facet 3); `D`, `E`, `F` are on
/// the respectively opposite edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AngleLabel {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl AngleLabel {
    /// All labels in canonical order.
    pub const ALL: [AngleLabel; 6] = [
        AngleLabel::A,
        AngleLabel::B,
        AngleLabel::C,
        AngleLabel::D,
        AngleLabel::E,
        AngleLabel::F,
    ];

    /// Position in the canonical `[A, B, C, D, E, F]` order.
    pub const fn index(self) -> usize {
        match self {
            AngleLabel::A => 0,
            AngleLabel::B => 1,
            AngleLabel::C => 2,
            AngleLabel::D => 3,
            AngleLabel::E => 4,
            AngleLabel::F => 5,
        }
    }

    /// The two facets whose planes meet at this angle; the Gram entry for
    /// this pair is `-cos` of the angle.
    pub const fn facet_pair(self) -> (usize, usize) {
        match self {
            AngleLabel::A => (0, 1),
            AngleLabel::B => (0, 2),
            AngleLabel::C => (1, 2),
            AngleLabel::D => (2, 3),
            AngleLabel::E => (1, 3),
            AngleLabel::F => (0, 3),
        }
    }

    /// The two vertices joined by the edge this angle sits on: exactly the
    /// vertices lying on both facets of [`facet_pair`](Self::facet_pair).
    pub const fn edge_vertices(self) -> (usize, usize) {
        match self {
            AngleLabel::A => (2, 3),
            AngleLabel::B => (1, 3),
            AngleLabel::C => (0, 3),
            AngleLabel::D => (0, 1),
            AngleLabel::E => (0, 2),
            AngleLabel::F => (1, 2),
        }
    }

    /// The label on the opposite edge (`A`↔`D`, `B`↔`E`, `C`↔`F`).
    pub const fn opposite(self) -> AngleLabel {
        match self {
            AngleLabel::A => AngleLabel::D,
            AngleLabel::B => AngleLabel::E,
            AngleLabel::C => AngleLabel::F,
            AngleLabel::D => AngleLabel::A,
            AngleLabel::E => AngleLabel::B,
            AngleLabel::F => AngleLabel::C,
        }
    }
}

impl core::fmt::Display for AngleLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            AngleLabel::A => "A",
            AngleLabel::B => "B",
            AngleLabel::C => "C",
            AngleLabel::D => "D",
            AngleLabel::E => "E",
            AngleLabel::F => "F",
        };
        f.write_str(s)
    }
}

/// Six dihedral angles in radians, each in `[0, pi)`.
///
/// Angle 0 is allowed (ultraparallel face planes, giving an ultraideal
/// vertex); pi is excluded since distinct face planes of a simplex never
/// meet at a straight angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DihedralAngles {
    angles: [f64; 6],
}

impl DihedralAngles {
    /// Validates the domain `[0, pi)` per coordinate (NaN is rejected).
    pub fn new(angles: [f64; 6]) -> Result<Self, ShapeError> {
        for (k, &v) in angles.iter().enumerate() {
            if !(0.0..PI).contains(&v) {
                return Err(ShapeError::AngleDomain {
                    label: AngleLabel::ALL[k],
                    value: v,
                });
            }
        }
        Ok(Self { angles })
    }

    /// Six equal angles.
    pub fn uniform(theta: f64) -> Result<Self, ShapeError> {
        Self::new([theta; 6])
    }

    /// The angle carried by `label`.
    pub fn get(&self, label: AngleLabel) -> f64 {
        self.angles[label.index()]
    }

    /// Angles in canonical `[A, B, C, D, E, F]` order.
    pub fn as_array(&self) -> [f64; 6] {
        self.angles
    }

    /// The Gram matrix of the four face planes: unit diagonal and
    /// `g[p][q] = -cos(theta)` for each label's facet pair `(p, q)`.
    pub fn gram(&self) -> GramMatrix {
        let mut entries = vec![0.0; 16];
        for i in 0..4 {
            entries[4 * i + i] = 1.0;
        }
        for label in AngleLabel::ALL {
            let (p, q) = label.facet_pair();
            let v = -libm::cos(self.get(label));
            entries[4 * p + q] = v;
            entries[4 * q + p] = v;
        }
        GramMatrix::new(4, entries).expect("angle-derived Gram matrix is well-formed")
    }

    /// Relabels angles by a permutation `sigma` of the four vertices:
    /// the angle between facets `p` and `q` moves to the label whose facet
    /// pair is `{sigma(p), sigma(q)}`. The 24 vertex permutations are
    /// exactly the relabelings that preserve the opposite-pair structure
    /// `{(A,D), (B,E), (C,F)}`, and they leave every invariant of the
    /// realized shape unchanged.
    pub fn permuted(&self, sigma: [usize; 4]) -> Self {
        let gram = self.gram();
        let mut angles = [0.0; 6];
        for label in AngleLabel::ALL {
            let (p, q) = label.facet_pair();
            // New Gram entry at (p,q) is the old entry at (sigma(p), sigma(q)).
            let g = gram.get(sigma[p], sigma[q]);
            angles[label.index()] = libm::acos(-g.clamp(-1.0, 1.0));
        }
        Self { angles }
    }
}

/// Vertex type by position relative to the projective unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexClass {
    /// Inside the ball: the diagonal cofactor is positive.
    Finite,
    /// On the boundary sphere: the diagonal cofactor vanishes.
    Ideal,
    /// Beyond the sphere (truncated by its polar plane): negative cofactor.
    Ultraideal,
}

impl core::fmt::Display for VertexClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            VertexClass::Finite => "Finite",
            VertexClass::Ideal => "Ideal",
            VertexClass::Ultraideal => "Ultraideal",
        };
        f.write_str(s)
    }
}

/// Per-vertex classes together with the witnessing diagonal cofactors.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexClassification {
    classes: Vec<VertexClass>,
    witnesses: Vec<f64>,
    tol: f64,
}

impl VertexClassification {
    /// The class of vertex `i` (the vertex opposite facet `i`).
    pub fn class(&self, i: usize) -> VertexClass {
        self.classes[i]
    }

    /// All classes in vertex order.
    pub fn classes(&self) -> &[VertexClass] {
        &self.classes
    }

    /// The diagonal cofactor `c_ii` that decided vertex `i`'s class.
    pub fn witness(&self, i: usize) -> f64 {
        self.witnesses[i]
    }

    /// The absolute tolerance used for the Ideal band.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// True if any vertex is Ideal.
    pub fn has_ideal(&self) -> bool {
        self.classes.contains(&VertexClass::Ideal)
    }

    /// True if every vertex is Finite.
    pub fn all_finite(&self) -> bool {
        self.classes.iter().all(|c| *c == VertexClass::Finite)
    }
}

/// Scale-relative tolerance for the Ideal classification band:
/// `1e-9 * max(1, |det G|)`.
pub fn classification_tolerance(det_g: f64) -> f64 {
    let scale = libm::fabs(det_g);
    1e-9 * if scale > 1.0 { scale } else { 1.0 }
}

/// Classifies each vertex by the sign of its diagonal cofactor:
/// `c_ii > tol` Finite, `|c_ii| <= tol` Ideal, `c_ii < -tol` Ultraideal.
pub fn classify_vertices(gram: &GramMatrix, tol: f64) -> VertexClassification {
    let n = gram.order();
    let mut classes = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    for i in 0..n {
        let c = gram.cofactor(i, i);
        witnesses.push(c);
        classes.push(if c > tol {
            VertexClass::Finite
        } else if c < -tol {
            VertexClass::Ultraideal
        } else {
            VertexClass::Ideal
        });
    }
    VertexClassification {
        classes,
        witnesses,
        tol,
    }
}

/// Checks the realizability conditions on an already-built Gram matrix of
/// any order `n + 1 >= 4`:
/// (a) signature `(n, 1)`, and (b) every off-diagonal cofactor positive.
// The negated comparison deliberately sends NaN cofactors to the error arm.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn check_realizability(gram: &GramMatrix, eps: f64) -> Result<(), ShapeError> {
    let sig = gram.signature(eps);
    let n = gram.order();
    if sig.positives != n - 1 || sig.negatives != 1 {
        return Err(ShapeError::ConditionA { signature: sig });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let c = gram.cofactor(i, j);
            if !(c > 0.0) {
                return Err(ShapeError::ConditionB { i, j, cofactor: c });
            }
        }
    }
    Ok(())
}

/// Builds the Gram matrix of the six angles and checks realizability,
/// returning the matrix on success.
pub fn validate_angles(angles: &DihedralAngles, eps: f64) -> Result<GramMatrix, ShapeError> {
    let gram = angles.gram();
    check_realizability(&gram, eps)?;
    Ok(gram)
}

/// Length of one edge, with its label and endpoint vertex indices.
///
/// The value is `+inf` exactly when an endpoint is Ideal. For an Ultraideal
/// endpoint the length is measured from/between the polar truncation
/// planes, which is what the cofactor closed form produces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeLength {
    label: AngleLabel,
    endpoints: (usize, usize),
    value: f64,
}

impl EdgeLength {
    /// The angle label this edge carries.
    pub fn label(&self) -> AngleLabel {
        self.label
    }

    /// Endpoint vertex indices.
    pub fn endpoints(&self) -> (usize, usize) {
        self.endpoints
    }

    /// The length; `+inf` when an endpoint is Ideal.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// True for a finite length (no Ideal endpoint).
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

/// A realized generalized hyperbolic tetrahedron: validated Gram data plus
/// explicit Minkowski vectors for the four facet normals and four vertices.
///
/// Invariants established by [`TetrahedronShape::realize`]:
/// - `<u_i, u_j> = g_ij` (unit spacelike normals reproducing the Gram matrix);
/// - `<v_i, u_j> = 0` for `i != j` (each vertex lies on its three planes);
/// - `<v_i, v_i>` is -1 / 0 / +1 for Finite / Ideal / Ultraideal vertices;
/// - `<v_i, v_j> < 0` for `i != j`;
/// - every Finite or Ideal vertex has positive time coordinate.
#[derive(Debug, Clone)]
pub struct TetrahedronShape {
    angles: DihedralAngles,
    gram: GramMatrix,
    det_g: f64,
    cofactors: Vec<f64>,
    classification: VertexClassification,
    normals: Vec<LorentzVector>,
    vertices: Vec<LorentzVector>,
}

impl TetrahedronShape {
    /// Realizes the tetrahedron with the default tolerance.
    pub fn realize(angles: &DihedralAngles) -> Result<Self, ShapeError> {
        Self::realize_with_eps(angles, DEFAULT_EPS)
    }

    /// Realizes the tetrahedron, rejecting angle sets that violate the
    /// signature or cofactor conditions.
    ///
    /// Construction follows the congruence proof of the realizability
    /// theorem: factor `G = Q diag(lambda) Q^T`, scale eigenvector columns
    /// by `sqrt(|lambda|)` to get normals `u_i` with `<u_i, u_j> = g_ij`
    /// (the negative eigenvalue supplies the time coordinate), form
    /// `w_i = sum_k c_ik u_k` (so `<w_i, w_j> = det G * c_ij`), flip the
    /// global sign if needed, and normalize each `w_i` by its class.
    // Negated comparisons deliberately send NaN time coordinates and
    // normalizations to the Degenerate arm.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn realize_with_eps(angles: &DihedralAngles, eps: f64) -> Result<Self, ShapeError> {
        let gram = validate_angles(angles, eps)?;
        let det_g = gram.determinant();
        let cofactors = gram.cofactor_matrix();
        let classification = classify_vertices(&gram, classification_tolerance(det_g));

        let (eigvals, eigvecs) = gram.eigen_symmetric();
        // Signature (3,1) was just validated, so eigvals[0] < 0 < eigvals[1..].
        let mut normals: Vec<LorentzVector> = (0..4)
            .map(|i| {
                let coords: Vec<f64> = (0..4)
                    .map(|k| libm::sqrt(libm::fabs(eigvals[k])) * eigvecs[4 * i + k])
                    .collect();
                LorentzVector::new(coords)
            })
            .collect();

        let mut w: Vec<LorentzVector> = (0..4)
            .map(|i| {
                let mut coords = vec![0.0; 4];
                for k in 0..4 {
                    let c = cofactors[4 * i + k];
                    for (x, u) in coords.iter_mut().zip(normals[k].coords()) {
                        *x += c * u;
                    }
                }
                LorentzVector::new(coords)
            })
            .collect();

        // The eigendecomposition fixes vectors only up to a global sign;
        // choose the orientation placing the vertices in the upper sheet.
        let time_sum: f64 = w.iter().map(|v| v.x0()).sum();
        if time_sum < 0.0 {
            for u in normals.iter_mut() {
                *u = u.scaled(-1.0);
            }
            for v in w.iter_mut() {
                *v = v.scaled(-1.0);
            }
        }

        let mut vertices = Vec::with_capacity(4);
        for (i, wi) in w.iter().enumerate() {
            let v = match classification.class(i) {
                VertexClass::Ideal => {
                    // Lightlike: any positive scaling is valid; pin x0 = 1
                    // for reproducibility.
                    let t = wi.x0();
                    if !(t > 0.0) {
                        return Err(ShapeError::Degenerate {
                            what: "ideal vertex with non-positive time coordinate",
                        });
                    }
                    wi.scaled(1.0 / t)
                }
                class => {
                    let c_ii = cofactors[4 * i + i];
                    let norm = libm::sqrt(libm::fabs(c_ii * det_g));
                    if !(norm > 0.0) {
                        return Err(ShapeError::Degenerate {
                            what: "vanishing vertex normalization",
                        });
                    }
                    let v = wi.scaled(1.0 / norm);
                    if class == VertexClass::Finite && !(v.x0() > 0.0) {
                        return Err(ShapeError::Degenerate {
                            what: "finite vertex with non-positive time coordinate",
                        });
                    }
                    v
                }
            };
            vertices.push(v);
        }

        Ok(Self {
            angles: *angles,
            gram,
            det_g,
            cofactors,
            classification,
            normals,
            vertices,
        })
    }

    /// The input angles.
    pub fn angles(&self) -> &DihedralAngles {
        &self.angles
    }

    /// The validated Gram matrix.
    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    /// `det G` (negative for every realizable shape).
    pub fn det_gram(&self) -> f64 {
        self.det_g
    }

    /// Cofactor `c_ij` of the Gram matrix.
    pub fn cofactor(&self, i: usize, j: usize) -> f64 {
        self.cofactors[4 * i + j]
    }

    /// Vertex classification with witnesses.
    pub fn classification(&self) -> &VertexClassification {
        &self.classification
    }

    /// Outward unit normal of facet `i` (a spacelike unit vector).
    pub fn normal(&self, i: usize) -> &LorentzVector {
        &self.normals[i]
    }

    /// All four facet normals.
    pub fn normals(&self) -> &[LorentzVector] {
        &self.normals
    }

    /// Vertex `i` (opposite facet `i`), normalized by class.
    pub fn vertex(&self, i: usize) -> &LorentzVector {
        &self.vertices[i]
    }

    /// All four vertices.
    pub fn vertices(&self) -> &[LorentzVector] {
        &self.vertices
    }

    /// Recovers the six angles from the constructed facet normals by
    /// `theta = arccos(-<u_p, u_q>)`.
    pub fn angles_from_normals(&self) -> Result<DihedralAngles, ShapeError> {
        let normals: &[LorentzVector; 4] = self
            .normals
            .as_slice()
            .try_into()
            .expect("shape always carries four normals");
        angles_from_normals(normals)
    }

    /// Length of the edge carrying `label`, via the cofactor closed form
    ///
    /// ```text
    /// exp(2 l) = (c_rs + sqrt(-det G) sin theta)^2 / |c_rr c_ss|
    /// ```
    ///
    /// where `(r, s)` are the edge's endpoint vertices. The numerator is
    /// the perfect-square form of `2 c_rs^2 - c_rr c_ss + 2 c_rs
    /// sqrt(-det G) sin theta` (they agree by the Jacobi identity, see
    /// [`jacobi_residual`]); the absolute value in the denominator unifies
    /// the finite/finite, ultraideal/ultraideal, and mixed cases.
    pub fn edge_length(&self, label: AngleLabel) -> EdgeLength {
        let (r, s) = label.edge_vertices();
        let endpoints = (r, s);
        if self.classification.class(r) == VertexClass::Ideal
            || self.classification.class(s) == VertexClass::Ideal
        {
            return EdgeLength {
                label,
                endpoints,
                value: f64::INFINITY,
            };
        }
        let q = libm::sqrt(-self.det_g);
        let theta = self.angles.get(label);
        let c_rs = self.cofactor(r, s);
        let c_rr = self.cofactor(r, r);
        let c_ss = self.cofactor(s, s);
        let num = c_rs + q * libm::sin(theta);
        let value = 0.5 * libm::log(num * num / libm::fabs(c_rr * c_ss));
        EdgeLength {
            label,
            endpoints,
            value,
        }
    }

    /// All six edge lengths in label order.
    pub fn edge_lengths(&self) -> [EdgeLength; 6] {
        AngleLabel::ALL.map(|label| self.edge_length(label))
    }
}

/// Recovers dihedral angles from four unit spacelike face normals by
/// `theta = arccos(-<u_p, u_q>)` over the label layout. Inner products
/// outside `[-1, 1]` (beyond tolerance) mean a pair of face planes does not
/// intersect, so no dihedral angle exists.
pub fn angles_from_normals(normals: &[LorentzVector; 4]) -> Result<DihedralAngles, ShapeError> {
    let mut angles = [0.0; 6];
    for label in AngleLabel::ALL {
        let (p, q) = label.facet_pair();
        let inner = normals[p]
            .inner(&normals[q])
            .map_err(|_| ShapeError::Degenerate {
                what: "normal vectors of mismatched dimension",
            })?;
        if libm::fabs(inner) > 1.0 + DEFAULT_EPS {
            return Err(ShapeError::UltraparallelFaces { p, q, inner });
        }
        angles[label.index()] = libm::acos((-inner).clamp(-1.0, 1.0));
    }
    DihedralAngles::new(angles)
}

/// Residual of the Jacobi cofactor identity
/// `c_rs^2 - c_rr c_ss = (-det G) sin^2(theta)` for the given label, where
/// `(r, s)` are the label's edge vertices and `sin^2(theta) = 1 - g_pq^2`
/// comes from the Gram entry of its facet pair. Identically zero in exact
/// arithmetic; the returned value is a pure roundoff statistic.
pub fn jacobi_residual(gram: &GramMatrix, label: AngleLabel) -> f64 {
    let (p, q) = label.facet_pair();
    let (r, s) = label.edge_vertices();
    let c_rs = gram.cofactor(r, s);
    let c_rr = gram.cofactor(r, r);
    let c_ss = gram.cofactor(s, s);
    let g = gram.get(p, q);
    let sin_sq = 1.0 - g * g;
    c_rs * c_rs - c_rr * c_ss - (-gram.determinant()) * sin_sq
}

/// Rejections and internal failures of shape construction.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeError {
    /// An input angle is outside `[0, pi)`.
    AngleDomain { label: AngleLabel, value: f64 },
    /// Condition (a) fails: the Gram matrix signature is not `(n, 1)`.
    ConditionA { signature: Signature },
    /// Condition (b) fails: an off-diagonal cofactor is not positive.
    ConditionB { i: usize, j: usize, cofactor: f64 },
    /// Two face planes do not intersect, so they have no dihedral angle.
    UltraparallelFaces { p: usize, q: usize, inner: f64 },
    /// Internal inconsistency (should not occur for validated inputs).
    Degenerate { what: &'static str },
}

impl core::fmt::Display for ShapeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::AngleDomain { label, value } => {
                write!(f, "angle {label} = {value} outside [0, pi)")
            }
            Self::ConditionA { signature } => {
                write!(f, "condition (a) violated: sgn G = {signature}")
            }
            Self::ConditionB { i, j, cofactor } => {
                write!(f, "condition (b) violated: cofactor ({i},{j}) = {cofactor}")
            }
            Self::UltraparallelFaces { p, q, inner } => {
                write!(
                    f,
                    "face planes {p} and {q} do not intersect (<u_p, u_q> = {inner})"
                )
            }
            Self::Degenerate { what } => write!(f, "degenerate construction: {what}"),
        }
    }
}

impl core::error::Error for ShapeError {}
