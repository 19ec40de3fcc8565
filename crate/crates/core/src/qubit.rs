//! Closed-form time-optimal cooling of a qubit with one Lindblad term.
//!
//! Every non-normal V is equivalent, up to a unitary frame, a rate γ and a
//! Hamiltonian correction, to Ṽ = [[0, 1], [ν, 0]] with ν ∈ [0, 1). In that
//! frame λ denotes the population of e₁; the reduced dynamics is
//! λ̇ = ½(a + (1 − 2λ)b) with a = J₁₂ − J₂₁ and b = J₁₂ + J₂₁.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::evolution::ControlSchedule;
use crate::haar::to_special_unitary;
use crate::linalg::{self, c, CMatrix, I};
use crate::quantum::{DensityMatrix, LindbladSystem};
use crate::reduced::j_matrix_unchecked;

/// Below this commutator norm a term counts as normal.
pub const NORMALITY_TOL: f64 = 1e-10;

/// Ṽ = [[0, 1], [ν, 0]].
pub fn v_tilde(nu: f64) -> CMatrix {
    linalg::from_real_rows(2, &[0.0, 1.0, nu, 0.0])
}

fn check_nu(nu: f64) -> Result<()> {
    if (0.0..1.0).contains(&nu) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("ν must lie in [0, 1), got {nu}")))
    }
}

/// V = √γ·e^{iφ}·ũ*Ṽũ + tr(V)/2 and Γ_V = i·ad_{h̃} + γ·Γ_{ũ*Ṽũ}.
#[derive(Debug, Clone)]
pub struct QubitNormalForm {
    pub nu: f64,
    pub gamma: f64,
    pub u_tilde: CMatrix,
    pub h_tilde: CMatrix,
    /// Global phase φ of the traceless part.
    pub phase: f64,
}

/// Normal form of a non-normal 2×2 Lindblad term.
pub fn normal_form(v: &CMatrix) -> Result<QubitNormalForm> {
    if v.nrows() != 2 || v.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: v.nrows(),
        });
    }
    if v.iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite);
    }
    let comm = linalg::commutator(v, &v.adjoint());
    if comm.norm() <= NORMALITY_TOL {
        return Err(Error::NormalTerm);
    }
    let tr = linalg::trace(v);
    let h_tilde = linalg::hermitian_part(
        &((v * tr.conj() - v.adjoint() * tr) * (I * 0.25)),
    );
    let traceless = v - CMatrix::identity(2, 2) * (tr * 0.5);

    // Rows of w are eigenvectors of [V, V*], largest eigenvalue first.
    let (_, vecs) = linalg::hermitian_eigen(&comm);
    let mut w = vecs.adjoint();
    let mut m = &w * &traceless * w.adjoint();
    if m[(0, 1)].norm() < m[(1, 0)].norm() {
        w.swap_rows(0, 1);
        m = &w * &traceless * w.adjoint();
    }
    let (p, q) = (m[(0, 1)], m[(1, 0)]);
    let alpha = 0.5 * (p.arg() - q.arg());
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(1.0, 0.0),
        c(alpha.cos(), alpha.sin()),
    ]));
    let u_tilde = to_special_unitary(&(d * w));
    let nu = (q.norm() / p.norm()).min(1.0 - f64::EPSILON);
    Ok(QubitNormalForm {
        nu,
        gamma: p.norm_sqr(),
        u_tilde,
        h_tilde,
        phase: p.arg() - alpha,
    })
}

impl QubitNormalForm {
    /// √γ·e^{iφ}·ũ*Ṽũ, the traceless part of the original term.
    pub fn traceless_term(&self) -> CMatrix {
        self.u_tilde.adjoint() * v_tilde(self.nu) * &self.u_tilde
            * (c(self.phase.cos(), self.phase.sin()) * self.gamma.sqrt())
    }
}

/// A point (a, b) of the space of generators Q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorPoint {
    pub a: f64,
    pub b: f64,
}

impl GeneratorPoint {
    /// λ̇ at population λ of e₁.
    pub fn derivative(&self, lam: f64) -> f64 {
        0.5 * (self.a + (1.0 - 2.0 * lam) * self.b)
    }
}

/// (a, b) read off J(U) for the normal-form term.
pub fn generator_point(nu: f64, u: &CMatrix) -> Result<GeneratorPoint> {
    check_nu(nu)?;
    let sys = LindbladSystem::dissipative(vec![v_tilde(nu)])?;
    let j = j_matrix_unchecked(&sys, u).0;
    Ok(GeneratorPoint {
        a: j[(0, 1)] - j[(1, 0)],
        b: j[(0, 1)] + j[(1, 0)],
    })
}

/// Generator of U = e^{iπzσ_z}·e^{iπxσ_x}.
pub fn q_point(nu: f64, x: f64, z: f64) -> Result<GeneratorPoint> {
    let u = linalg::unitary_exp(&(linalg::pauli_z() * c(PI * z, 0.0)))
        * linalg::unitary_exp(&(linalg::pauli_x() * c(PI * x, 0.0)));
    generator_point(nu, &u)
}

/// b on the latitude parabola through `z`: 1 + ν² − ½|1 − ν·e^{4πiz}|²(1 − (a/(1−ν²))²).
pub fn q_curve(nu: f64, a: f64, z: f64) -> f64 {
    let spread = 1.0 + nu * nu - 2.0 * nu * (4.0 * PI * z).cos();
    1.0 + nu * nu - 0.5 * spread * (1.0 - (a / (1.0 - nu * nu)).powi(2))
}

/// The two parabolas bounding Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Lower boundary, b(0) = ½(1 − ν)².
    Minus,
    /// Upper boundary, b(0) = ½(1 + ν)².
    Plus,
}

/// Boundary value b(a) on the chosen branch; both meet at the corners a = ±(1 − ν²).
pub fn q_boundary(nu: f64, a: f64, branch: Branch) -> Result<f64> {
    check_nu(nu)?;
    let width = 1.0 - nu * nu;
    if !(a.abs() <= width + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "|a| = {} exceeds 1 − ν² = {width}",
            a.abs()
        )));
    }
    let k = match branch {
        Branch::Minus => (1.0 + nu).powi(2),
        Branch::Plus => (1.0 - nu).powi(2),
    };
    Ok(1.0 + nu * nu - 0.5 * k * (1.0 - (a / width).powi(2)))
}

/// Switching population λ₀ = 1/(1 + ν).
pub fn lambda0(nu: f64) -> f64 {
    1.0 / (1.0 + nu)
}

/// Maximal achievable λ̇ at population λ.
pub fn mu(nu: f64, lam: f64) -> f64 {
    if lam <= lambda0(nu) {
        0.5 * (1.0 - nu * nu - (1.0 + nu * nu) * (2.0 * lam - 1.0))
    } else {
        let s = 2.0 * lam - 1.0;
        ((1.0 - nu) / 2.0).powi(2) * (1.0 / s - s)
    }
}

/// 1 for the linear branch of μ, 2 for the curved one.
pub fn mu_branch(nu: f64, lam: f64) -> u8 {
    if lam <= lambda0(nu) {
        1
    } else {
        2
    }
}

/// max ½(a + (1 − 2λ)b) over the boundary parabolas, maximized in closed form
/// per branch; an oracle for [`mu`] that does not use its formula.
pub fn mu_from_boundary(nu: f64, lam: f64) -> f64 {
    let width = 1.0 - nu * nu;
    let s = 1.0 - 2.0 * lam;
    let mut best = f64::NEG_INFINITY;
    for k in [(1.0 + nu).powi(2), (1.0 - nu).powi(2)] {
        // ½(a + s(1 + ν² − ½k) + ½sk·a²/width²), a quadratic in a.
        let value = |a: f64| 0.5 * (a + s * (1.0 + nu * nu - 0.5 * k * (1.0 - (a / width).powi(2))));
        best = best.max(value(width)).max(value(-width));
        let curvature = s * k / (width * width);
        if curvature < 0.0 {
            let a = -1.0 / curvature;
            if a.abs() <= width {
                best = best.max(value(a));
            }
        }
    }
    best
}

/// Time at which λ* reaches λ₀; infinite for ν = 0.
pub fn t0(nu: f64) -> f64 {
    if nu <= 0.0 {
        return f64::INFINITY;
    }
    let r = 1.0 + nu * nu;
    -(1.0 - r / (1.0 + nu)).ln() / r
}

/// Constant of the late branch λ* = ½(1 + √(1 − c·e^{−(1−ν)²t})).
pub fn c_const(nu: f64) -> f64 {
    if nu <= 0.0 {
        return 0.0;
    }
    4.0 * nu / (1.0 + nu).powi(2) * ((1.0 - nu).powi(2) * t0(nu)).exp()
}

/// Optimal reduced path: λ*(t) and the rotation angle y*(t) (in units of π).
pub fn opt_path(nu: f64, t: f64) -> (f64, f64) {
    let switch = t0(nu);
    if t <= switch {
        let r = 1.0 + nu * nu;
        return ((1.0 - (-r * t).exp()) / r, 0.0);
    }
    let lam = 0.5 * (1.0 + (1.0 - c_const(nu) * (-(1.0 - nu).powi(2) * t).exp()).sqrt());
    (lam, y_star(nu, lam))
}

fn y_star(nu: f64, lam: f64) -> f64 {
    let kappa = (1.0 - nu) / (1.0 + nu);
    let arg = 0.5 * (1.0 + kappa / (1.0 - 2.0 * lam));
    arg.clamp(0.0, 1.0).sqrt().asin() / PI
}

/// Limit of y*(t) as t → ∞.
pub fn y_star_limit(nu: f64) -> f64 {
    (nu / (1.0 + nu)).sqrt().asin() / PI
}

/// (x, z) Bloch coordinates of the optimal state diag(λ*, 1 − λ*) rotated by e^{−iπy*σ_y}.
pub fn bloch_xz(nu: f64, t: f64) -> (f64, f64) {
    let (lam, y) = opt_path(nu, t);
    let rho = optimal_state(lam, y);
    let x = linalg::trace(&(linalg::pauli_x() * &rho)).re;
    let z = linalg::trace(&(linalg::pauli_z() * &rho)).re;
    (x, z)
}

/// Rotation e^{−iπyσ_y} carrying diag(λ, 1 − λ) to the optimal state.
pub fn path_unitary(y: f64) -> CMatrix {
    linalg::unitary_exp(&(linalg::pauli_y() * c(-PI * y, 0.0)))
}

fn optimal_state(lam: f64, y: f64) -> CMatrix {
    let u = path_unitary(y);
    &u * linalg::diag_real(&[lam, 1.0 - lam]) * u.adjoint()
}

/// The two contributions to the optimal u_y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UyParts {
    /// π·dy*/dt, from differentiating the path rotation.
    pub direct: f64,
    /// Cancels the drift tangent to the unitary orbit.
    pub compensation: f64,
}

impl UyParts {
    pub fn total(&self) -> f64 {
        self.direct + self.compensation
    }
}

/// Direct and compensating parts of u_y at time t (zero before t₀, infinite at t₀).
pub fn u_y_parts(nu: f64, t: f64) -> UyParts {
    let switch = t0(nu);
    if t < switch {
        return UyParts {
            direct: 0.0,
            compensation: 0.0,
        };
    }
    if t == switch {
        return UyParts {
            direct: f64::INFINITY,
            compensation: 0.0,
        };
    }
    let (lam, y) = opt_path(nu, t);
    let s = 2.0 * lam - 1.0;
    let kappa = (1.0 - nu) / (1.0 + nu);
    let gap = s * s - kappa * kappa;
    let direct = if gap > 0.0 {
        (kappa / s) / gap.sqrt() * mu(nu, lam)
    } else {
        f64::INFINITY
    };
    let angle = 2.0 * PI * y;
    let compensation =
        (1.0 + nu) * angle.sin() / 4.0 * (2.0 * (1.0 - nu) / s - (1.0 + nu) * angle.cos());
    UyParts {
        direct,
        compensation,
    }
}

/// Optimal control amplitude of σ_y in the normal-form frame.
pub fn u_y_control(nu: f64, t: f64) -> f64 {
    u_y_parts(nu, t).total()
}

/// Full-system realization of the optimal qubit cooling.
#[derive(Clone)]
pub struct QubitSchedule {
    pub normal_form: QubitNormalForm,
    /// ũ*·diag(0, 1)·ũ, the excited state of the normal-form frame.
    pub initial_state: DensityMatrix,
    pub control: ControlSchedule,
}

impl std::fmt::Debug for QubitSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QubitSchedule")
            .field("normal_form", &self.normal_form)
            .field("initial_state", &self.initial_state)
            .finish_non_exhaustive()
    }
}

/// H(t) = −h̃ + γ·u_y(γt)·ũ*σ_yũ, started from ũ*·diag(0, 1)·ũ.
///
/// The frame change ũ is folded into the initial state. The control is
/// evaluated pointwise; the singular instant t₀/γ itself maps to zero.
pub fn general_schedule(v: &CMatrix) -> Result<QubitSchedule> {
    let nf = normal_form(v)?;
    let sigma = nf.u_tilde.adjoint() * linalg::pauli_y() * &nf.u_tilde;
    let h_tilde = nf.h_tilde.clone();
    let (nu, gamma) = (nf.nu, nf.gamma);
    let drive = Arc::new(move |t: f64| {
        let u = u_y_control(nu, gamma * t);
        let u = if u.is_finite() { u } else { 0.0 };
        &sigma * c(gamma * u, 0.0) - &h_tilde
    });
    let control = ControlSchedule::function(2, move |t| drive(t));
    let initial_state = DensityMatrix::new(
        nf.u_tilde.adjoint() * linalg::diag_real(&[0.0, 1.0]) * &nf.u_tilde,
    )?;
    Ok(QubitSchedule {
        normal_form: nf,
        initial_state,
        control,
    })
}
