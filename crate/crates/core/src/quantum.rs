//! Density matrices, Lindblad systems and the GKS–Lindblad right-hand side.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, I};
use crate::simplex::SimplexPoint;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues down to this value are clipped to zero; below it a state is rejected.
pub const NEGATIVITY_TOL: f64 = 1e-10;

fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(m.nrows())
}

fn check_dim(m: &CMatrix, n: usize) -> Result<()> {
    let got = check_square(m)?;
    if got != n {
        return Err(Error::DimensionMismatch { expected: n, got });
    }
    Ok(())
}

/// Checks that `m` is square, finite and Hermitian to 1e−12.
pub fn check_hermitian(m: &CMatrix) -> Result<()> {
    check_square(m)?;
    let err = linalg::hermiticity_error(m);
    if err > HERMITIAN_TOL {
        return Err(Error::NotHermitian(err));
    }
    Ok(())
}

/// A positive semi-definite, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(rho: CMatrix) -> Result<Self> {
        check_hermitian(&rho)?;
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = linalg::hermitian_eigenvalues(&rho)
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -NEGATIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self(rho))
    }

    /// diag(λ).
    pub fn diagonal(lam: &SimplexPoint) -> Self {
        Self(linalg::diag_real(lam.as_slice()))
    }

    /// u · diag(λ) · u*.
    pub fn from_spectrum(lam: &SimplexPoint, u: &CMatrix) -> Self {
        let d = linalg::diag_real(lam.as_slice());
        Self(linalg::hermitian_part(&(u * d * u.adjoint())))
    }

    /// Wraps a matrix produced by an integrator that maintains Hermiticity and
    /// unit trace itself; positivity is the caller's business.
    pub(crate) fn from_trusted(rho: CMatrix) -> Self {
        Self(rho)
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::diagonal(&SimplexPoint::center(n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.0)
            .last()
            .copied()
            .unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.0)
            .first()
            .copied()
            .unwrap_or(0.0)
    }
}

/// Drift Hamiltonian plus Lindblad terms V₁..V_r; together they define −L.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladSystem {
    h0: CMatrix,
    terms: Vec<CMatrix>,
}

impl LindbladSystem {
    pub fn new(h0: CMatrix, terms: Vec<CMatrix>) -> Result<Self> {
        check_hermitian(&h0)?;
        let n = h0.nrows();
        if terms.is_empty() {
            return Err(Error::NoLindbladTerms);
        }
        for v in &terms {
            check_dim(v, n)?;
        }
        Ok(Self { h0, terms })
    }

    /// A system without drift Hamiltonian.
    pub fn dissipative(terms: Vec<CMatrix>) -> Result<Self> {
        let n = terms.first().ok_or(Error::NoLindbladTerms)?.nrows();
        Self::new(linalg::zeros(n), terms)
    }

    pub fn dim(&self) -> usize {
        self.h0.nrows()
    }

    pub fn h0(&self) -> &CMatrix {
        &self.h0
    }

    pub fn terms(&self) -> &[CMatrix] {
        &self.terms
    }

    /// −ΣΓ_{V_k}(ρ): the purely dissipative part of the generator.
    pub fn dissipative_part(&self, rho: &CMatrix) -> Result<CMatrix> {
        let mut out = linalg::zeros(self.dim());
        for v in &self.terms {
            out += dissipator(v, rho)?;
        }
        Ok(out)
    }
}

/// −Γ_V(ρ) = VρV* − ½(V*Vρ + ρV*V).
pub fn dissipator(v: &CMatrix, rho: &CMatrix) -> Result<CMatrix> {
    let n = check_square(rho)?;
    check_dim(v, n)?;
    let vd = v.adjoint();
    let vdv = &vd * v;
    Ok(v * rho * &vd - (&vdv * rho + rho * &vdv) * linalg::real(0.5))
}

/// −i[h₀ + h_extra, ρ] + Σ_k −Γ_{V_k}(ρ).
pub fn lindblad_rhs(sys: &LindbladSystem, rho: &CMatrix, h_extra: &CMatrix) -> Result<CMatrix> {
    let n = sys.dim();
    check_dim(rho, n)?;
    check_dim(h_extra, n)?;
    let h = sys.h0() + h_extra;
    Ok(linalg::commutator(&h, rho) * (-I) + sys.dissipative_part(rho)?)
}

/// Eigenvalues of ρ in non-increasing order, clipped to [0, 1] and renormalized.
pub fn spectrum_desc(rho: &DensityMatrix) -> SimplexPoint {
    let vals: Vec<f64> = linalg::hermitian_eigenvalues(rho.matrix())
        .into_iter()
        .map(|x| x.clamp(0.0, 1.0))
        .collect();
    SimplexPoint::normalized(vals).expect("a density matrix has positive trace")
}
