//! Dense complex matrices and the small set of linear-algebra helpers the
//! rest of the crate needs: tensor products, Hilbert-Schmidt inner products,
//! unitarity/Hermiticity residuals, Hermitian eigenvalues, and eigenbasis
//! extraction for unitaries whose spectrum is the d-th roots of unity.

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Entrywise tolerance for matrix identities (max absolute deviation).
pub const TOL_MAT: f64 = 1e-9;
/// Tolerance for SIC/MUB overlap checks.
pub const TOL_SIC: f64 = 1e-8;
/// Tolerance for eigenvalue positivity; looser than [`TOL_MAT`] because the
/// eigensolver amplifies entrywise error.
pub const TOL_PSD: f64 = 1e-7;

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

/// Largest absolute entry of `m`.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute entrywise difference between two matrices.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    max_abs(&(a - b))
}

/// Hilbert-Schmidt inner product `tr[a† b]`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    (a.adjoint() * b).trace()
}

/// `‖U†U − 1‖_max`; zero for exact unitaries.
pub fn unitarity_residual(m: &CMatrix) -> f64 {
    let dim = m.nrows();
    max_abs_diff(&(m.adjoint() * m), &identity(dim))
}

/// `‖M − M†‖_max`; zero for exact Hermitian matrices.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// `(M + M†)/2`, used before eigenvalue computations to suppress the
/// asymmetry noise of operators that are Hermitian only to tolerance.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `|v⟩⟨w|`.
pub fn outer(v: &CVector, w: &CVector) -> CMatrix {
    v * w.adjoint()
}

/// `m^n` by repeated multiplication (`n` is at most `d`, so this is cheap).
pub fn matrix_power(m: &CMatrix, n: usize) -> CMatrix {
    let mut out = identity(m.nrows());
    for _ in 0..n {
        out = &out * m;
    }
    out
}

/// Smallest eigenvalue of a (numerically) Hermitian matrix.
pub fn min_eigenvalue_hermitian(m: &CMatrix) -> f64 {
    let eig = hermitize(m).symmetric_eigen();
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// All eigenvalues of a (numerically) Hermitian matrix, ascending.
pub fn eigenvalues_hermitian(m: &CMatrix) -> Vec<f64> {
    let eig = hermitize(m).symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Orthonormal eigenbasis of a unitary `u` satisfying `u^d = 1`, ordered by
/// eigenvalue `ω^k`, k = 0..d.
///
/// Uses the spectral projectors `P_k = (1/d) Σ_m ω^{-km} u^m`, which are
/// exact for root-of-unity spectra, so no general eigensolver is needed.
/// Requires a nondegenerate spectrum (each projector has rank one), which
/// holds for every observable built in this crate.
pub fn root_unity_eigenbasis(u: &CMatrix, d: usize) -> Vec<CVector> {
    let dim = u.nrows();
    let mut powers = Vec::with_capacity(d);
    let mut acc = identity(dim);
    for _ in 0..d {
        powers.push(acc.clone());
        acc = &acc * u;
    }
    (0..d)
        .map(|k| {
            let mut proj = CMatrix::zeros(dim, dim);
            for (m, um) in powers.iter().enumerate() {
                // ω^{-km} with the exponent reduced mod d before any float math
                let e = (k * m) % d;
                let phase =
                    Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * e as f64 / d as f64);
                proj += um.scale_complex(phase);
            }
            let proj = proj.unscale(d as f64);
            // rank-one projector: any nonzero column spans the eigenspace
            let (best, _) = (0..dim)
                .map(|j| (j, proj.column(j).norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty matrix");
            let col = proj.column(best).into_owned();
            let n = col.norm();
            col.unscale(n)
        })
        .collect()
}

/// Max deviation of the Gram matrix of `vecs` from the identity.
pub fn gram_residual(vecs: &[CVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, v) in vecs.iter().enumerate() {
        for (j, w) in vecs.iter().enumerate() {
            let g = v.dotc(w);
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

trait ScaleComplex {
    fn scale_complex(&self, z: Complex64) -> CMatrix;
}

impl ScaleComplex for CMatrix {
    fn scale_complex(&self, z: Complex64) -> CMatrix {
        self.map(|e| e * z)
    }
}
