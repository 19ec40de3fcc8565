//! Small dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(n: usize) -> CMatrix {
    CMatrix::zeros(n, n)
}

/// Builds a complex matrix from a row-major slice of real entries.
pub fn from_real_rows(n: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), n * n);
    CMatrix::from_fn(n, n, |i, j| real(entries[i * n + j]))
}

/// Matrix unit |i⟩⟨j| (zero-based).
pub fn ket_bra(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = zeros(n);
    m[(i, j)] = real(1.0);
    m
}

pub fn pauli_x() -> CMatrix {
    from_real_rows(2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[real(0.0), -I, I, real(0.0)])
}

pub fn pauli_z() -> CMatrix {
    from_real_rows(2, &[1.0, 0.0, 0.0, -1.0])
}

/// Lowering operator σ₋ = |0⟩⟨1| in the basis (|0⟩, |1⟩).
pub fn sigma_minus() -> CMatrix {
    ket_bra(2, 0, 1)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * real(0.5)
}

/// Largest entrywise deviation of `m` from its conjugate transpose.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let mut err: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            err = err.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    err
}

/// Largest entrywise deviation of `u*u` from the identity.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let p = u.adjoint() * u;
    let mut err: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            err = err.max((p[(i, j)] - real(target)).norm());
        }
    }
    err
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}

/// Frobenius inner product tr(a* b).
pub fn inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigen-decomposition of the Hermitian part of `m`.
///
/// Eigenvalues come back in non-increasing order; ties keep the order in
/// which the solver produced them. Column `k` of the returned matrix is the
/// eigenvector for eigenvalue `k`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = hermitian_part(m);
    let eig = SymmetricEigen::new(h);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Eigenvalues of a general square complex matrix, read off the diagonal of
/// its complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let n = m.nrows();
    match n {
        0 => Vec::new(),
        1 => vec![m[(0, 0)]],
        _ => {
            let (_, t) = m.clone().schur().unpack();
            (0..n).map(|k| t[(k, k)]).collect()
        }
    }
}

/// Orthonormal basis (as columns) of the numerical null space of `a`.
///
/// Singular values at or below `tol * max(1, ‖a‖₂)` count as zero.
pub fn null_space(a: &CMatrix, tol: f64) -> CMatrix {
    let cols = a.ncols();
    if cols == 0 {
        return CMatrix::zeros(a.nrows().max(1), 0);
    }
    // Pad with zero rows so the SVD returns a full set of right singular vectors.
    let rows = a.nrows().max(cols);
    let mut padded = CMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let scale = svd.singular_values.iter().cloned().fold(1.0, f64::max);
    let kept: Vec<usize> = (0..cols)
        .filter(|&k| svd.singular_values[k] <= tol * scale)
        .collect();
    let mut basis = CMatrix::zeros(cols, kept.len());
    for (out, &k) in kept.iter().enumerate() {
        for j in 0..cols {
            basis[(j, out)] = v_t[(k, j)].conj();
        }
    }
    basis
}

/// Orthonormalizes the columns of `m`, dropping numerically dependent ones.
pub fn orthonormalize(m: &CMatrix, tol: f64) -> CMatrix {
    let mut cols: Vec<CVector> = Vec::new();
    for j in 0..m.ncols() {
        let mut v: CVector = m.column(j).into_owned();
        for _ in 0..2 {
            for q in &cols {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm > tol {
            cols.push(v / real(norm));
        }
    }
    if cols.is_empty() {
        CMatrix::zeros(m.nrows(), 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

/// Matrix exponential of `i·h` for Hermitian `h`, via its eigen-decomposition.
pub fn unitary_exp(h: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(h);
    let phases = DVector::from_iterator(
        values.len(),
        values.iter().map(|&x| Complex64::from_polar(1.0, x)),
    );
    &vectors * CMatrix::from_diagonal(&phases) * vectors.adjoint()
}

/// Complex determinant via LU.
pub fn det(m: &CMatrix) -> Complex64 {
    m.clone().lu().determinant()
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { real(values[i]) } else { real(0.0) })
}

/// Permutation matrix P with P e_j = e_{perm[j]}.
pub fn permutation_matrix(perm: &[usize]) -> CMatrix {
    let n = perm.len();
    let mut p = zeros(n);
    for (j, &pj) in perm.iter().enumerate() {
        p[(pj, j)] = real(1.0);
    }
    p
}
