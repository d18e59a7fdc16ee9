//! Lorentzian (Minkowski) linear algebra over R^{1,n}.
//!
//! The inner product is `<x, y> = -x0*y0 + x1*y1 + ... + xn*yn`, with index 0
//! the timelike coordinate. Unit spacelike vectors (`<u,u> = 1`) serve as
//! oriented plane normals; the Gram matrix of the four face normals of a
//! tetrahedron, `G[i][j] = -cos(angle between faces i and j)`, is the object
//! every realization and volume question reduces to.
//!
//! Determinants and cofactors are computed by direct expansion: at order 4 or
//! 5 the exact sign of a small cofactor matters more than speed, and direct
//! expansion has no pivoting noise. Signatures come from a cyclic Jacobi
//! eigensolver, which is unconditionally stable for symmetric matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A vector in R^{1,n}: coordinate 0 is timelike, coordinates 1..=n spacelike.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzVector {
    coords: Vec<f64>,
}

/// Error for operations mixing vectors of different dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionMismatch {
    pub left: usize,
    pub right: usize,
}

impl fmt::Display for DimensionMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dimension mismatch: {} vs {} coordinates",
            self.left, self.right
        )
    }
}

impl core::error::Error for DimensionMismatch {}

impl LorentzVector {
    /// Wraps coordinates `(x0, x1, ..., xn)`; needs at least one spacelike slot.
    pub fn new(coords: Vec<f64>) -> Self {
        assert!(coords.len() >= 2, "need a timelike and a spacelike slot");
        Self { coords }
    }

    /// Spatial dimension `n` (one less than the coordinate count).
    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    /// All coordinates, timelike first.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Timelike coordinate `x0`.
    pub fn x0(&self) -> f64 {
        self.coords[0]
    }

    /// Lorentzian inner product `-x0*y0 + sum_{k>=1} xk*yk`.
    pub fn inner(&self, other: &Self) -> Result<f64, DimensionMismatch> {
        if self.coords.len() != other.coords.len() {
            return Err(DimensionMismatch {
                left: self.coords.len(),
                right: other.coords.len(),
            });
        }
        Ok(lorentz_inner_slices(&self.coords, &other.coords))
    }

    /// Scales every coordinate.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }
}

/// `<x, y> = -x0*y0 + sum_{k>=1} xk*yk` on raw coordinate slices of equal length.
pub fn lorentz_inner_slices(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut s = -x[0] * y[0];
    for k in 1..x.len() {
        s += x[k] * y[k];
    }
    s
}

/// Inertia of a symmetric matrix: counts of positive, negative, and
/// (numerically) zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zeros == 0 {
            write!(f, "({},{})", self.positives, self.negatives)
        } else {
            write!(
                f,
                "({},{};{} zero)",
                self.positives, self.negatives, self.zeros
            )
        }
    }
}

/// Symmetric matrix of `-cos` of the dihedral angles between face planes:
/// unit diagonal (the angle of a plane with itself is pi), off-diagonal
/// entries in `[-1, 1]`.
///
/// The order is generic (`>= 2`) so the realization criterion can be checked
/// for simplices of any dimension; the volume formula downstream is specific
/// to order 4.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    order: usize,
    /// Row-major entries, `order * order` of them.
    entries: Vec<f64>,
}

impl GramMatrix {
    /// Builds from row-major entries, checking symmetry, unit diagonal, and
    /// off-diagonal range. Symmetry must be exact: callers construct entries
    /// from a single cosine per pair, so any asymmetry is a logic error.
    pub fn new(order: usize, entries: Vec<f64>) -> Result<Self, GramMatrixError> {
        if order < 2 || entries.len() != order * order {
            return Err(GramMatrixError::Shape {
                order,
                len: entries.len(),
            });
        }
        for i in 0..order {
            for j in 0..order {
                let e = entries[i * order + j];
                if e != entries[j * order + i] {
                    return Err(GramMatrixError::Asymmetric { i, j });
                }
                if i == j && e != 1.0 {
                    return Err(GramMatrixError::Diagonal { i, value: e });
                }
                if i != j && !(-1.0..=1.0).contains(&e) {
                    return Err(GramMatrixError::OffDiagonalRange { i, j, value: e });
                }
            }
        }
        Ok(Self { order, entries })
    }

    /// Matrix order (number of face planes, i.e. `n + 1`).
    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry `G[i][j]`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.order && j < self.order, "index out of range");
        self.entries[i * self.order + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Determinant by direct cofactor expansion.
    pub fn determinant(&self) -> f64 {
        det_dense(&self.entries, self.order)
    }

    /// Cofactor `c[i][j] = (-1)^(i+j) det(G with row i and column j deleted)`.
    /// Symmetric in `(i, j)` for symmetric `G`.
    pub fn cofactor(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.order && j < self.order, "index out of range");
        let m = self.order - 1;
        let mut minor = vec![0.0; m * m];
        let mut r = 0;
        for row in 0..self.order {
            if row == i {
                continue;
            }
            let mut c = 0;
            for col in 0..self.order {
                if col == j {
                    continue;
                }
                minor[r * m + c] = self.entries[row * self.order + col];
                c += 1;
            }
            r += 1;
        }
        let sign = if (i + j).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * det_dense(&minor, m)
    }

    /// Full cofactor matrix, row-major.
    pub fn cofactor_matrix(&self) -> Vec<f64> {
        let n = self.order;
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                c[i * n + j] = self.cofactor(i, j);
            }
        }
        c
    }

    /// Eigenvalues and eigenvectors (`G = Q diag(l) Q^T`, columns of `Q` are
    /// eigenvectors), by cyclic Jacobi rotations. Eigenvalues ascend.
    pub fn eigen_symmetric(&self) -> (Vec<f64>, Vec<f64>) {
        jacobi_eigen(&self.entries, self.order)
    }

    /// Signature with zero-threshold `eps` relative to the largest
    /// eigenvalue magnitude.
    pub fn signature(&self, eps: f64) -> Signature {
        assert!(eps > 0.0, "eps must be positive");
        let (vals, _) = self.eigen_symmetric();
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
        let thresh = eps * scale;
        let mut sig = Signature {
            positives: 0,
            negatives: 0,
            zeros: 0,
        };
        for v in vals {
            if v > thresh {
                sig.positives += 1;
            } else if v < -thresh {
                sig.negatives += 1;
            } else {
                sig.zeros += 1;
            }
        }
        sig
    }
}

/// Construction errors for [`GramMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub enum GramMatrixError {
    /// Order and entry count disagree, or order < 2.
    Shape { order: usize, len: usize },
    /// `entries[i][j] != entries[j][i]`.
    Asymmetric { i: usize, j: usize },
    /// Diagonal entry is not exactly 1.
    Diagonal { i: usize, value: f64 },
    /// Off-diagonal entry outside `[-1, 1]`.
    OffDiagonalRange { i: usize, j: usize, value: f64 },
}

impl fmt::Display for GramMatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shape { order, len } => {
                write!(f, "bad shape: order {order} with {len} entries")
            }
            Self::Asymmetric { i, j } => write!(f, "entries ({i},{j}) and ({j},{i}) differ"),
            Self::Diagonal { i, value } => write!(f, "diagonal entry ({i},{i}) = {value}, not 1"),
            Self::OffDiagonalRange { i, j, value } => {
                write!(f, "entry ({i},{j}) = {value} outside [-1, 1]")
            }
        }
    }
}

impl core::error::Error for GramMatrixError {}

/// Determinant of a dense row-major `n x n` matrix by recursive cofactor
/// expansion along the first row. Exact sign behaviour at small orders; not
/// intended for n beyond ~8.
fn det_dense(a: &[f64], n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => {
            let m = n - 1;
            let mut minor = vec![0.0; m * m];
            let mut det = 0.0;
            let mut sign = 1.0;
            for col in 0..n {
                for r in 1..n {
                    let mut c = 0;
                    for cc in 0..n {
                        if cc == col {
                            continue;
                        }
                        minor[(r - 1) * m + c] = a[r * n + cc];
                        c += 1;
                    }
                }
                det += sign * a[col] * det_dense(&minor, m);
                sign = -sign;
            }
            det
        }
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns ascending
/// eigenvalues and the row-major eigenvector matrix (columns are
/// eigenvectors). Converges quadratically; the sweep cap is never reached for
/// the well-scaled matrices this crate produces.
fn jacobi_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut m = a.to_vec();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let fro: f64 = libm::sqrt(a.iter().map(|x| x * x).sum());
    let tol = 1e-15 * fro.max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for r in (p + 1)..n {
                off += m[p * n + r] * m[p * n + r];
            }
        }
        if libm::sqrt(2.0 * off) <= tol {
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apq = m[p * n + r];
                if libm::fabs(apq) <= tol / (n as f64) {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[r * n + r];
                let theta = (aqq - app) / (2.0 * apq);
                // Stable tangent of the rotation angle (smaller root).
                let t = {
                    let s = if theta >= 0.0 { 1.0 } else { -1.0 };
                    s / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + r];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + r] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[r * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[r * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let qkp = q[k * n + p];
                    let qkq = q[k * n + r];
                    q[k * n + p] = c * qkp - s * qkq;
                    q[k * n + r] = s * qkp + c * qkq;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    // Sort ascending, carrying eigenvector columns along.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
    let sorted_vals: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
    let mut sorted_q = vec![0.0; n * n];
    for (new_col, &old_col) in idx.iter().enumerate() {
        for row in 0..n {
            sorted_q[row * n + new_col] = q[row * n + old_col];
        }
    }
    vals = sorted_vals;
    (vals, sorted_q)
}
