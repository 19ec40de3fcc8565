//! Asymptotic coolability from the common eigenvectors of the Lindblad terms.
//!
//! A system is coolable when some common eigenvector of all `V_k` is not also
//! a common left eigenvector. Common eigenvectors are found by recursive
//! intersection: split the current invariant subspace into eigenspaces of one
//! non-scalar restricted term, shrink each eigenspace to its largest subspace
//! invariant under every term, and recurse.

use num_complex::Complex64;

use crate::linalg::{self, CMatrix, CVector};
use crate::quantum::LindbladSystem;

/// Residual tolerance for eigenvector tests.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Eigenvalues closer than this are grouped into one eigenspace.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Relative singular-value cutoff when extracting eigenspaces.
const NULL_TOL: f64 = 1e-7;

/// An isolated common eigenvector with eigenvalue `μ_k` for each term.
#[derive(Debug, Clone)]
pub struct CommonRay {
    pub vector: CVector,
    pub eigenvalues: Vec<Complex64>,
}

/// Subspace of dimension ≥ 2 on which every term acts as a scalar.
#[derive(Debug, Clone)]
pub struct Continuum {
    /// Orthonormal basis as columns.
    pub basis: CMatrix,
    pub eigenvalues: Vec<Complex64>,
}

#[derive(Debug, Clone, Default)]
pub struct CommonEigenvectors {
    pub rays: Vec<CommonRay>,
    pub continua: Vec<Continuum>,
}

impl CommonEigenvectors {
    pub fn has_continuum(&self) -> bool {
        !self.continua.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty() && self.continua.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct CoolabilityVerdict {
    pub coolable: bool,
    /// Common right eigenvector that fails the left test.
    pub witness: Option<CVector>,
    pub diagnostics: CommonEigenvectors,
}

fn scalar_value(a: &CMatrix) -> Option<Complex64> {
    let m = a.nrows();
    let mu = linalg::trace(a) / linalg::real(m as f64);
    let scale = a.norm().max(1.0);
    let off = (a - CMatrix::identity(m, m) * mu).norm();
    (off <= RESIDUAL_TOL * scale).then_some(mu)
}

/// Columns of `s` (orthonormal, inside an invariant subspace of dimension m)
/// spanning the largest subspace of span(s) invariant under all `ops`.
fn largest_invariant(ops: &[CMatrix], mut s: CMatrix) -> CMatrix {
    let m = s.nrows();
    loop {
        let k = s.ncols();
        if k == 0 {
            return s;
        }
        let proj = CMatrix::identity(m, m) - &s * s.adjoint();
        let mut stacked = CMatrix::zeros(m * ops.len(), k);
        for (i, a) in ops.iter().enumerate() {
            stacked
                .view_mut((i * m, 0), (m, k))
                .copy_from(&(&proj * a * &s));
        }
        let coeffs = linalg::null_space(&stacked, NULL_TOL);
        if coeffs.ncols() == k {
            return s;
        }
        s = linalg::orthonormalize(&(&s * coeffs), 1e-10);
    }
}

/// Eigenvalue clusters of `a` (mean value per cluster).
fn eigenvalue_clusters(a: &CMatrix) -> Vec<Complex64> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for z in linalg::eigenvalues(a) {
        match clusters.iter_mut().find(|(c, _)| (*c - z).norm() <= CLUSTER_TOL) {
            Some((c, count)) => {
                *c = (*c * linalg::real(*count as f64) + z) / linalg::real(*count as f64 + 1.0);
                *count += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    clusters.into_iter().map(|(c, _)| c).collect()
}

/// Searches the invariant subspace spanned by the columns of `basis`.
fn search(terms: &[CMatrix], basis: &CMatrix, depth: usize, out: &mut CommonEigenvectors) {
    let restricted: Vec<CMatrix> = terms.iter().map(|v| basis.adjoint() * v * basis).collect();
    let m = basis.ncols();
    let pivot = restricted.iter().position(|a| scalar_value(a).is_none());
    let Some(pivot) = pivot.filter(|_| depth > 0) else {
        let eigenvalues = restricted
            .iter()
            .map(|a| linalg::trace(a) / linalg::real(m as f64))
            .collect();
        if m == 1 {
            out.rays.push(polish(terms, basis.column(0).into_owned()));
        } else {
            out.continua.push(Continuum {
                basis: basis.clone(),
                eigenvalues,
            });
        }
        return;
    };
    let a = &restricted[pivot];
    for mu in eigenvalue_clusters(a) {
        let eig = linalg::null_space(&(a - CMatrix::identity(m, m) * mu), NULL_TOL);
        let inv = largest_invariant(&restricted, eig);
        if inv.ncols() > 0 {
            search(terms, &linalg::orthonormalize(&(basis * inv), 1e-10), depth - 1, out);
        }
    }
}

/// Rayleigh eigenvalues and one inverse-iteration style cleanup of a ray.
fn polish(terms: &[CMatrix], w: CVector) -> CommonRay {
    let n = w.len();
    let mut w = &w / linalg::real(w.norm());
    let mus: Vec<Complex64> = terms.iter().map(|v| w.dotc(&(v * &w))).collect();
    let mut stacked = CMatrix::zeros(n * terms.len(), n);
    for (i, (v, mu)) in terms.iter().zip(&mus).enumerate() {
        stacked
            .view_mut((i * n, 0), (n, n))
            .copy_from(&(v - CMatrix::identity(n, n) * *mu));
    }
    let svd = stacked.svd(false, true);
    if let Some(v_t) = svd.v_t {
        let (k, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (i, &s)| if s < best.1 { (i, s) } else { best });
        let candidate: CVector = v_t.row(k).adjoint();
        if right_residual(terms, &candidate) < right_residual(terms, &w) {
            w = candidate;
        }
    }
    let eigenvalues = terms.iter().map(|v| w.dotc(&(v * &w))).collect();
    CommonRay { vector: w, eigenvalues }
}

fn right_residual(terms: &[CMatrix], w: &CVector) -> f64 {
    terms
        .iter()
        .map(|v| {
            let mu = w.dotc(&(v * w));
            (v * w - w * mu).norm()
        })
        .fold(0.0, f64::max)
}

/// All common eigenvectors of `terms`: isolated rays plus continua.
pub fn common_eigenvectors(terms: &[CMatrix]) -> CommonEigenvectors {
    let mut out = CommonEigenvectors::default();
    let Some(first) = terms.first() else {
        return out;
    };
    let n = first.nrows();
    if terms.iter().any(|v| v.nrows() != n || v.ncols() != n) {
        return out;
    }
    search(terms, &CMatrix::identity(n, n), n, &mut out);
    out
}

/// True iff `w` (unit norm) is a left eigenvector of every term.
pub fn is_common_left_eigenvector(w: &CVector, terms: &[CMatrix]) -> bool {
    terms.iter().all(|v| {
        let row = w.adjoint() * v;
        let mu = (&row * w)[(0, 0)];
        (row - w.adjoint() * mu).norm() <= RESIDUAL_TOL
    })
}

/// Condition (i) of the coolability theorem on the traceless-shifted terms.
pub fn is_coolable(sys: &LindbladSystem) -> CoolabilityVerdict {
    let n = sys.dim();
    let shifted: Vec<CMatrix> = sys
        .terms()
        .iter()
        .map(|v| v - CMatrix::identity(n, n) * (linalg::trace(v) / linalg::real(n as f64)))
        .collect();
    let diagnostics = common_eigenvectors(&shifted);
    let candidates = diagnostics
        .rays
        .iter()
        .map(|r| r.vector.clone())
        .chain(
            diagnostics
                .continua
                .iter()
                .flat_map(|c| c.basis.column_iter().map(|b| b.into_owned()).collect::<Vec<_>>()),
        );
    let witness = candidates
        .filter(|w| right_residual(sys.terms(), w) <= RESIDUAL_TOL)
        .find(|w| !is_common_left_eigenvector(w, sys.terms()));
    CoolabilityVerdict {
        coolable: witness.is_some(),
        witness,
        diagnostics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real_rows, identity, ket_bra, kron, pauli_x, pauli_z, real, sigma_minus};

    fn unit(n: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(n);
        v[i] = real(1.0);
        v
    }

    fn parallel(a: &CVector, b: &CVector) -> bool {
        (a.dotc(b).norm() - a.norm() * b.norm()).abs() < 1e-9
    }

    #[test]
    fn jordan_block_has_one_ray() {
        let found = common_eigenvectors(&[ket_bra(2, 0, 1)]);
        assert_eq!(found.rays.len(), 1);
        assert!(!found.has_continuum());
        assert!(parallel(&found.rays[0].vector, &unit(2, 0)));
        assert!(found.rays[0].eigenvalues[0].norm() < 1e-12);
    }

    #[test]
    fn nu_block_has_two_rays() {
        let nu: f64 = 0.5;
        let found = common_eigenvectors(&[from_real_rows(2, &[0.0, 1.0, nu, 0.0])]);
        assert_eq!(found.rays.len(), 2);
        for sign in [1.0, -1.0] {
            let expected = CVector::from_vec(vec![real(1.0), real(sign * nu.sqrt())]);
            let ray = found.rays.iter().find(|r| parallel(&r.vector, &expected)).unwrap();
            assert!((ray.eigenvalues[0] - real(sign * nu.sqrt())).norm() < 1e-12);
        }
    }

    #[test]
    fn v_system_ray() {
        let terms = [ket_bra(3, 0, 1), ket_bra(3, 0, 2) * real(2f64.sqrt())];
        let found = common_eigenvectors(&terms);
        assert_eq!(found.rays.len(), 1);
        assert!(parallel(&found.rays[0].vector, &unit(3, 0)));
        assert!(found.rays[0].eigenvalues.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn sigma_z_rays_and_identity_continuum() {
        let found = common_eigenvectors(&[pauli_z()]);
        assert_eq!(found.rays.len(), 2);
        assert!(!found.has_continuum());
        let found = common_eigenvectors(&[identity(3)]);
        assert!(found.has_continuum());
        assert_eq!(found.continua[0].basis.ncols(), 3);
    }

    #[test]
    fn left_eigenvector_examples() {
        assert!(!is_common_left_eigenvector(&unit(2, 0), &[ket_bra(2, 0, 1)]));
        assert!(is_common_left_eigenvector(&unit(2, 0), &[pauli_z()]));
        let v = kron(&sigma_minus(), &identity(2));
        assert!(!is_common_left_eigenvector(&unit(4, 0), &[v]));
    }

    #[test]
    fn verdicts() {
        let sys = |terms: Vec<CMatrix>| LindbladSystem::dissipative(terms).unwrap();
        for nu in [0.0, 0.25, 0.5, 0.9] {
            let v = is_coolable(&sys(vec![from_real_rows(2, &[0.0, 1.0, nu, 0.0])]));
            assert!(v.coolable);
        }
        assert!(!is_coolable(&sys(vec![pauli_x()])).coolable);
        assert!(!is_coolable(&sys(vec![pauli_z()])).coolable);
        let lam = sys(vec![ket_bra(3, 1, 0), ket_bra(3, 2, 0) * real(2f64.sqrt())]);
        assert!(is_coolable(&lam).coolable);
        let spin = sys(vec![kron(&sigma_minus(), &identity(2))]);
        let verdict = is_coolable(&spin);
        assert!(verdict.coolable);
        assert!(verdict.diagnostics.has_continuum());
    }

    #[test]
    fn witness_residuals() {
        let v = from_real_rows(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.5]);
        let sys = LindbladSystem::dissipative(vec![v.clone()]).unwrap();
        let verdict = is_coolable(&sys);
        let w = verdict.witness.expect("coolable");
        assert!(right_residual(&[v], &w) <= RESIDUAL_TOL);
    }

    #[test]
    fn shared_eigenvector_of_commuting_terms_is_not_a_witness() {
        let a = crate::linalg::diag_real(&[1.0, 2.0, 3.0]);
        let b = crate::linalg::diag_real(&[0.0, 5.0, -1.0]);
        let sys = LindbladSystem::dissipative(vec![a, b]).unwrap();
        let verdict = is_coolable(&sys);
        assert!(!verdict.coolable);
        assert_eq!(verdict.diagnostics.rays.len(), 3);
    }
}
