//! Dense complex-matrix primitives shared by the physics modules.
//!
//! Everything operates on dynamically sized `nalgebra` matrices over
//! `Complex64`. Dimensions stay small (at most 81 for vectorized
//! superoperators), so dense algorithms are used throughout.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::C64;

/// Dense complex matrix, the working type of the whole crate.
pub type CMatrix = DMatrix<C64>;

/// Largest entry magnitude, used as the scale for tolerance checks.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Checks `m` against its own adjoint entrywise.
///
/// `tol` is interpreted relative to the largest entry magnitude once that
/// magnitude exceeds one, so the check stays meaningful for matrices of any
/// overall scale.
pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    hermitian_deviation(m) <= tol * max_abs(m).max(1.0)
}

/// Max entrywise deviation between `m` and its adjoint.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Checks unitarity through the Gram matrix `m^† m`.
pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let gram = m.adjoint() * m;
    let eye = CMatrix::identity(m.nrows(), m.ncols());
    max_abs(&(gram - eye)) <= tol
}

/// Symmetrized copy `(m + m^†)/2`, used to scrub rounding asymmetry.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Bosonic lowering operator truncated to `dim` levels: the superdiagonal
/// carries `sqrt(j + 1)` so that `a |j+1> = sqrt(j+1) |j>`.
pub fn ladder_operator(dim: usize) -> Result<CMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension { min: 2, got: dim });
    }
    let mut a = CMatrix::zeros(dim, dim);
    for j in 0..dim - 1 {
        a[(j, j + 1)] = C64::new(((j + 1) as f64).sqrt(), 0.0);
    }
    Ok(a)
}

/// Kronecker product with the left factor on the slow index, so basis vectors
/// of the product order as `|i>_A |j>_B  ->  i * dim_B + j`.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial transpose of a bipartite matrix with factor dimensions
/// `dims = (dim_a, dim_b)`, transposing only the chosen subsystem.
pub fn partial_transpose(
    rho: &CMatrix,
    dims: (usize, usize),
    subsystem: Subsystem,
) -> Result<CMatrix> {
    let (da, db) = dims;
    let n = da * db;
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::ShapeMismatch(format!(
            "expected {n}x{n} for factor dims ({da}, {db}), got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let mut out = CMatrix::zeros(n, n);
    for ia in 0..da {
        for ja in 0..da {
            for ib in 0..db {
                for jb in 0..db {
                    let (row, col) = match subsystem {
                        Subsystem::A => (ja * db + ib, ia * db + jb),
                        Subsystem::B => (ia * db + jb, ja * db + ib),
                    };
                    out[(row, col)] = rho[(ia * db + ib, ja * db + jb)];
                }
            }
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are real and sorted ascending; `eigenvectors` holds the
/// matching orthonormal eigenvectors as columns. Each column's phase is fixed
/// by rotating its largest-magnitude entry onto the positive real axis, so
/// repeated decompositions of the same matrix agree exactly.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Rebuilds the original matrix as `V diag(lambda) V^†`.
    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.eigenvectors;
        let lambda = CMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                C64::new(self.eigenvalues[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        v * lambda * v.adjoint()
    }
}

/// Hermitian eigendecomposition with deterministic ordering and phases.
///
/// The input must be Hermitian to within `1e-10` (relative to its largest
/// entry); the decomposition itself runs on the symmetrized matrix so that
/// harmless rounding asymmetry cannot leak into the output.
pub fn eig_hermitian(m: &CMatrix) -> Result<Spectrum> {
    if m.nrows() != m.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "eig_hermitian needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let dev = hermitian_deviation(m);
    if dev > 1e-10 * max_abs(m).max(1.0) {
        return Err(Error::NotHermitian { dev });
    }
    let n = m.nrows();
    let se = SymmetricEigen::new(hermitize(m));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(se.eigenvalues[src]);
        let col = se.eigenvectors.column(src);
        // Phase convention: largest-magnitude entry becomes real positive.
        let pivot = col
            .iter()
            .copied()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap();
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            eigenvectors[(i, dst)] = col[i] * phase;
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Trace norm (sum of singular values).
///
/// Hermitian inputs take the accurate route through their own spectrum;
/// general matrices go through the Gram matrix `m^† m`, whose eigenvalues are
/// the squared singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    if m.nrows() == m.ncols() && is_hermitian(m, 1e-12) {
        let spec = eig_hermitian(m).expect("hermitian check already passed");
        return spec.eigenvalues.iter().map(|l| l.abs()).sum();
    }
    let gram = m.adjoint() * m;
    let spec = eig_hermitian(&hermitize(&gram)).expect("gram matrix is hermitian");
    spec.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).sum()
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-neg_tol, 0)` are clamped to zero to absorb rounding;
/// anything more negative is a genuine violation and is rejected.
pub fn sqrtm_psd(m: &CMatrix, neg_tol: f64) -> Result<CMatrix> {
    let spec = eig_hermitian(m)?;
    let mut roots = Vec::with_capacity(spec.dim());
    for &l in &spec.eigenvalues {
        if l < -neg_tol {
            return Err(Error::InvalidState(format!(
                "matrix is not positive semidefinite: eigenvalue {l:.3e}"
            )));
        }
        roots.push(l.max(0.0).sqrt());
    }
    let v = &spec.eigenvectors;
    let d = CMatrix::from_fn(spec.dim(), spec.dim(), |i, j| {
        if i == j {
            C64::new(roots[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(v * d * v.adjoint())
}

/// Matrix exponential by scaling and squaring with a degree-13 Pade
/// approximant. Accurate for the moderate norms that arise from vectorized
/// generators over finite horizons; dimensions here never exceed 81.
pub fn expm(m: &CMatrix) -> CMatrix {
    const THETA_13: f64 = 5.371920351148152;
    #[rustfmt::skip]
    const B: [f64; 14] = [
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0,
        670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
        960960.0, 16380.0, 182.0, 1.0,
    ];

    assert_eq!(m.nrows(), m.ncols(), "expm needs a square matrix");
    let n = m.nrows();

    // One-norm (max column sum) controls the scaling parameter.
    let norm1 = (0..n)
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm1 > THETA_13 {
        (norm1 / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = m.map(|z| z / C64::new(2f64.powi(s), 0.0));

    let eye = CMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &a6 * (a6.scale(B[13]) + a4.scale(B[11]) + a2.scale(B[9]))
        + a6.scale(B[7])
        + a4.scale(B[5])
        + a2.scale(B[3])
        + eye.scale(B[1]);
    let u = &a * u_inner;
    let v = &a6 * (a6.scale(B[12]) + a4.scale(B[10]) + a2.scale(B[8]))
        + a6.scale(B[6])
        + a4.scale(B[4])
        + a2.scale(B[2])
        + eye.scale(B[0]);

    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut r = lhs
        .lu()
        .solve(&rhs)
        .expect("Pade denominator is nonsingular for scaled input");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}
