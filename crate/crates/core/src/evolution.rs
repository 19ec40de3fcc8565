//! Control schedules and fixed-step RK4 integration of the full bilinear
//! control system ρ̇ = −i[H₀ + H(t), ρ] − ΣΓ_{V_k}(ρ).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::quantum::{check_hermitian, lindblad_rhs, DensityMatrix, LindbladSystem};

/// Integration aborts once the smallest eigenvalue drops below this.
pub const POSITIVITY_ABORT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    /// `hamiltonians[k]` is applied on `[times[k], times[k+1])`.
    Hold,
    /// Linear interpolation between samples, clamped at both ends.
    Linear,
}

/// An (idealized) instantaneous unitary kick ρ → WρW* at `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct Impulse {
    pub time: f64,
    pub unitary: CMatrix,
}

#[derive(Clone)]
pub enum Drive {
    Zero,
    Sampled {
        times: Vec<f64>,
        hamiltonians: Vec<CMatrix>,
        interpolation: Interpolation,
    },
    Function(Arc<dyn Fn(f64) -> CMatrix + Send + Sync>),
}

impl fmt::Debug for Drive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Drive::Zero => write!(f, "Zero"),
            Drive::Sampled {
                times,
                interpolation,
                ..
            } => write!(f, "Sampled({} samples, {interpolation:?})", times.len()),
            Drive::Function(_) => write!(f, "Function(..)"),
        }
    }
}

/// Control Hamiltonian H(t) added to the drift, plus optional unitary kicks.
#[derive(Debug, Clone)]
pub struct ControlSchedule {
    dim: usize,
    drive: Drive,
    impulses: Vec<Impulse>,
}

impl ControlSchedule {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            drive: Drive::Zero,
            impulses: Vec::new(),
        }
    }

    pub fn constant(h: CMatrix) -> Result<Self> {
        Self::sampled(vec![0.0], vec![h], Interpolation::Hold)
    }

    pub fn sampled(
        times: Vec<f64>,
        hamiltonians: Vec<CMatrix>,
        interpolation: Interpolation,
    ) -> Result<Self> {
        if times.is_empty() || times.len() != hamiltonians.len() {
            return Err(Error::MisalignedGrids(format!(
                "{} times for {} Hamiltonians",
                times.len(),
                hamiltonians.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::MisalignedGrids("times must increase strictly".into()));
        }
        let dim = hamiltonians[0].nrows();
        for h in &hamiltonians {
            check_hermitian(h)?;
            if h.nrows() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: h.nrows(),
                });
            }
        }
        Ok(Self {
            dim,
            drive: Drive::Sampled {
                times,
                hamiltonians,
                interpolation,
            },
            impulses: Vec::new(),
        })
    }

    /// H(t) given by a callback; the callback must return Hermitian matrices.
    pub fn function(dim: usize, f: impl Fn(f64) -> CMatrix + Send + Sync + 'static) -> Self {
        Self {
            dim,
            drive: Drive::Function(Arc::new(f)),
            impulses: Vec::new(),
        }
    }

    pub fn with_impulse(mut self, time: f64, unitary: CMatrix) -> Result<Self> {
        let err = linalg::unitarity_error(&unitary);
        if err > 1e-10 {
            return Err(Error::NotUnitary(err));
        }
        if unitary.nrows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: unitary.nrows(),
            });
        }
        self.impulses.push(Impulse { time, unitary });
        self.impulses
            .sort_by(|a, b| a.time.partial_cmp(&b.time).unwrap_or(std::cmp::Ordering::Equal));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn drive(&self) -> &Drive {
        &self.drive
    }

    pub fn impulses(&self) -> &[Impulse] {
        &self.impulses
    }

    fn is_hold(&self) -> bool {
        matches!(
            self.drive,
            Drive::Zero
                | Drive::Sampled {
                    interpolation: Interpolation::Hold,
                    ..
                }
        )
    }

    /// H(t) (without the drift Hamiltonian).
    pub fn hamiltonian_at(&self, t: f64) -> CMatrix {
        match &self.drive {
            Drive::Zero => linalg::zeros(self.dim),
            Drive::Function(f) => f(t),
            Drive::Sampled {
                times,
                hamiltonians,
                interpolation,
            } => {
                let k = times.partition_point(|&s| s <= t);
                match interpolation {
                    Interpolation::Hold => hamiltonians[k.saturating_sub(1)].clone(),
                    Interpolation::Linear => {
                        if k == 0 {
                            hamiltonians[0].clone()
                        } else if k == times.len() {
                            hamiltonians[k - 1].clone()
                        } else {
                            let w = (t - times[k - 1]) / (times[k] - times[k - 1]);
                            &hamiltonians[k - 1] * linalg::real(1.0 - w)
                                + &hamiltonians[k] * linalg::real(w)
                        }
                    }
                }
            }
        }
    }
}

/// Classical RK4 on ρ̇ = −i[H₀ + H(t), ρ] − ΣΓ_{V_k}(ρ).
///
/// Every step is re-Hermitized and trace-renormalized. Steps end exactly on
/// impulse times; an impulse produces a second sample at the same time
/// holding the kicked state. Held (piecewise-constant) drives are evaluated
/// once per step at the step midpoint.
pub fn integrate_full(
    sys: &LindbladSystem,
    rho0: &DensityMatrix,
    ctrl: &ControlSchedule,
    t_end: f64,
    dt: f64,
) -> Result<Vec<(f64, DensityMatrix)>> {
    let mut out = Vec::new();
    integrate_full_with(sys, rho0, ctrl, t_end, dt, |t, rho| {
        out.push((t, rho.clone()));
    })?;
    Ok(out)
}

/// Like [`integrate_full`] but hands every sample to `observe` instead of
/// collecting them.
pub fn integrate_full_with(
    sys: &LindbladSystem,
    rho0: &DensityMatrix,
    ctrl: &ControlSchedule,
    t_end: f64,
    dt: f64,
    mut observe: impl FnMut(f64, &DensityMatrix),
) -> Result<DensityMatrix> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!("t_end must be ≥ 0, got {t_end}")));
    }
    let n = sys.dim();
    for m in [rho0.dim(), ctrl.dim()] {
        if m != n {
            return Err(Error::DimensionMismatch { expected: n, got: m });
        }
    }

    let eps = 1e-12 * dt.max(1.0);
    let mut rho = rho0.matrix().clone();
    let mut t = 0.0;
    let mut pending = ctrl.impulses().iter().filter(|imp| imp.time >= -eps).peekable();
    let hold = ctrl.is_hold();

    let mut current = DensityMatrix::from_trusted(rho.clone());
    observe(t, &current);
    loop {
        while let Some(imp) = pending.next_if(|imp| imp.time <= t + eps) {
            rho = linalg::hermitian_part(&(&imp.unitary * &rho * imp.unitary.adjoint()));
            current = DensityMatrix::from_trusted(rho.clone());
            observe(t, &current);
        }
        if t >= t_end - eps {
            break;
        }
        let mut h = dt.min(t_end - t);
        if let Some(imp) = pending.peek() {
            h = h.min(imp.time - t);
        }
        // Avoid a sliver step from floating-point drift on the uniform grid.
        if t_end - (t + h) < eps {
            h = t_end - t;
        }

        let k = if hold {
            let hm = ctrl.hamiltonian_at(t + 0.5 * h);
            rk4_step(&rho, h, |r| lindblad_rhs(sys, r, &hm))?
        } else {
            let (h0, hmid, h1) = (
                ctrl.hamiltonian_at(t),
                ctrl.hamiltonian_at(t + 0.5 * h),
                ctrl.hamiltonian_at(t + h),
            );
            rk4_step_staged(&rho, h, |stage, r| {
                let hs = match stage {
                    0 => &h0,
                    3 => &h1,
                    _ => &hmid,
                };
                lindblad_rhs(sys, r, hs)
            })?
        };
        rho = linalg::hermitian_part(&k);
        let tr = rho.trace().re;
        rho /= linalg::real(tr);
        t += h;

        let min = linalg::hermitian_eigenvalues(&rho).last().copied().unwrap_or(0.0);
        if !(min >= -POSITIVITY_ABORT) {
            return Err(Error::PositivityViolation {
                time: t,
                min_eigenvalue: min,
            });
        }
        current = DensityMatrix::from_trusted(rho.clone());
        observe(t, &current);
    }
    Ok(current)
}

fn rk4_step(
    rho: &CMatrix,
    h: f64,
    mut f: impl FnMut(&CMatrix) -> Result<CMatrix>,
) -> Result<CMatrix> {
    rk4_step_staged(rho, h, |_, r| f(r))
}

fn rk4_step_staged(
    rho: &CMatrix,
    h: f64,
    mut f: impl FnMut(usize, &CMatrix) -> Result<CMatrix>,
) -> Result<CMatrix> {
    let half = linalg::real(0.5 * h);
    let k1 = f(0, rho)?;
    let k2 = f(1, &(rho + &k1 * half))?;
    let k3 = f(2, &(rho + &k2 * half))?;
    let k4 = f(3, &(rho + &k3 * linalg::real(h)))?;
    Ok(rho + (k1 + (k2 + k3) * linalg::real(2.0) + k4) * linalg::real(h / 6.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag_real, ket_bra, max_abs, pauli_x, pauli_z, zeros};

    fn decay_system() -> LindbladSystem {
        LindbladSystem::dissipative(vec![ket_bra(2, 0, 1)]).unwrap()
    }

    fn excited() -> DensityMatrix {
        DensityMatrix::new(diag_real(&[0.0, 1.0])).unwrap()
    }

    #[test]
    fn two_level_decay_matches_exact_solution() {
        let traj = integrate_full(&decay_system(), &excited(), &ControlSchedule::zero(2), 1.0, 1e-3)
            .unwrap();
        let (t, rho) = traj.last().unwrap();
        assert!((t - 1.0).abs() < 1e-12);
        let e = (-1.0f64).exp();
        assert!(max_abs(&(rho.matrix() - diag_real(&[1.0 - e, e]))) < 1e-8);
        assert_eq!(traj.len(), 1001);
    }

    #[test]
    fn zero_field_keeps_state() {
        let sys = LindbladSystem::dissipative(vec![zeros(2)]).unwrap();
        let rho0 = DensityMatrix::new(diag_real(&[0.3, 0.7])).unwrap();
        let traj = integrate_full(&sys, &rho0, &ControlSchedule::zero(2), 0.5, 0.1).unwrap();
        for (_, rho) in traj {
            assert_eq!(rho.matrix(), rho0.matrix());
        }
    }

    #[test]
    fn dephasing_fixes_diagonal_state() {
        let sys = LindbladSystem::dissipative(vec![pauli_z()]).unwrap();
        let rho0 = DensityMatrix::new(diag_real(&[1.0, 0.0])).unwrap();
        let traj = integrate_full(&sys, &rho0, &ControlSchedule::zero(2), 2.0, 1e-2).unwrap();
        for (_, rho) in traj {
            assert!(max_abs(&(rho.matrix() - rho0.matrix())) < 1e-15);
        }
    }

    #[test]
    fn impulse_applies_kick() {
        let sys = LindbladSystem::dissipative(vec![zeros(2)]).unwrap();
        let ctrl = ControlSchedule::zero(2).with_impulse(0.25, pauli_x()).unwrap();
        let traj = integrate_full(&sys, &excited(), &ctrl, 0.5, 0.1).unwrap();
        let (_, last) = traj.last().unwrap();
        assert!(max_abs(&(last.matrix() - diag_real(&[1.0, 0.0]))) < 1e-15);
        assert!(traj.iter().any(|(t, _)| (t - 0.25).abs() < 1e-12));
    }

    #[test]
    fn rejects_bad_step() {
        let r = integrate_full(&decay_system(), &excited(), &ControlSchedule::zero(2), 1.0, 0.0);
        assert!(matches!(r, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn huge_step_trips_positivity_guard() {
        let r = integrate_full(&decay_system(), &excited(), &ControlSchedule::zero(2), 10.0, 5.0);
        assert!(matches!(r, Err(Error::PositivityViolation { .. })));
    }

    #[test]
    fn linear_interpolation() {
        let ctrl = ControlSchedule::sampled(
            vec![0.0, 1.0],
            vec![zeros(2), pauli_x()],
            Interpolation::Linear,
        )
        .unwrap();
        let h = ctrl.hamiltonian_at(0.25);
        assert!((h[(0, 1)].re - 0.25).abs() < 1e-15);
        assert!(ControlSchedule::sampled(vec![0.0, 0.0], vec![zeros(2), zeros(2)], Interpolation::Hold).is_err());
    }
}
