//! Hyperbolic volume of generalized (mildly truncated) tetrahedra.
//!
//! A generalized hyperbolic tetrahedron is described by its six dihedral
//! angles `(A, B, C, D, E, F)`: the edges carrying `A`, `B`, `C` meet at one
//! vertex and `D`, `E`, `F` sit on the respectively opposite edges. Vertices
//! that fall outside hyperbolic space ("ultraideal") are cut off by their
//! polar planes, which keeps the volume finite.
//!
//! This crate provides, in dependency order:
//!
//! - [`lorentz`]: Minkowski inner product, Gram matrices of face normals,
//!   cofactors, determinants, and signatures.
//! - [`specfun`]: complex dilogarithm Li2 (principal branch) and the
//!   Lobachevsky function.
//! - [`shape`]: the realization criterion (Gram signature `(3,1)` plus
//!   positive off-diagonal cofactors), vertex construction and
//!   classification, and edge lengths.
//! - [`volume`]: the Murakami-Yano closed form — the volume is the imaginary
//!   part of an eight-term dilogarithm sum evaluated at the two saddle points
//!   of its integrand — plus a Schlafli-differential verification harness.
//! - [`oracle`]: an independent Monte-Carlo volume estimate in the projective
//!   (Beltrami-Klein) ball model.
//! - [`sampling`]: seeded generators of random valid angle sets for property
//!   tests and verification sweeps.
//!
//! The crate is `no_std` (with `alloc`); everything is a pure function over
//! immutable values and safe to call concurrently.
//!
//! # References
//!
//! - J. Murakami, M. Yano, *On the volume of a hyperbolic and spherical
//!   tetrahedron*, Comm. Anal. Geom. 13 (2005).
//! - A. Ushijima, *A volume formula for generalised hyperbolic tetrahedra*,
//!   in Non-Euclidean Geometries, Springer (2006).
//! - J. Milnor, *Hyperbolic geometry: the first 150 years*, Bull. AMS (1982).

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod lorentz;
pub mod oracle;
pub mod sampling;
pub mod shape;
pub mod specfun;
pub mod volume;

pub use lorentz::{GramMatrix, LorentzVector, Signature};
pub use num_complex::Complex64;
pub use oracle::{HalfSpace, HalfSpaceSystem, McEstimate, OracleError};
pub use shape::{
    AngleLabel, DihedralAngles, EdgeLength, ShapeError, TetrahedronShape, VertexClass,
    VertexClassification,
};
pub use volume::{SaddlePair, VolumeError, VolumeResult};
