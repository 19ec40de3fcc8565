//! The reduced control system λ̇ = −L_U λ on the eigenvalue simplex.
//!
//! J(U)_{ij} = Σ_k |⟨i|U*V_kU|j⟩|² and −L_U = J(U) − diag(colsum J(U)); the
//! column-sum correction makes every column of −L_U sum to zero, so the
//! simplex is forward invariant.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::evolution::{ControlSchedule, Interpolation};
use crate::haar::{self, to_special_unitary};
use crate::linalg::{self, CMatrix};
use crate::quantum::{DensityMatrix, LindbladSystem};
use crate::simplex::{SimplexPoint, TangentVector};

pub const UNITARY_TOL: f64 = 1e-10;
/// Reduced trajectories may dip this far below zero before integration aborts.
pub const SIMPLEX_TOL: f64 = 1e-9;
/// Eigenvalue gaps below this are treated as degenerate by the pseudo-inverse.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Entrywise non-negative rate matrix J(U).
#[derive(Debug, Clone, PartialEq)]
pub struct JMatrix(pub DMatrix<f64>);

/// −L_U = J − diag(Jᵀ𝟙); off-diagonal entries ≥ 0, zero column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedGenerator(pub DMatrix<f64>);

impl JMatrix {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.0.row_iter().map(|r| r.sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        self.0.column_iter().map(|c| c.sum()).collect()
    }

    /// J(P) for P e_j = e_{perm[j]} is the relabeling J_{perm[i], perm[j]}.
    pub fn relabel(&self, perm: &[usize]) -> JMatrix {
        let n = self.dim();
        JMatrix(DMatrix::from_fn(n, n, |i, j| self.0[(perm[i], perm[j])]))
    }
}

impl InducedGenerator {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn max_col_sum(&self) -> f64 {
        self.0
            .column_iter()
            .map(|c| c.sum().abs())
            .fold(0.0, f64::max)
    }
}

fn check_unitary(u: &CMatrix, n: usize) -> Result<()> {
    if u.nrows() != n || u.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.nrows(),
        });
    }
    let err = linalg::unitarity_error(u);
    if !(err <= UNITARY_TOL) {
        return Err(Error::NotUnitary(err));
    }
    Ok(())
}

/// J(U) for a unitary `u` (checked to 1e−10).
pub fn j_matrix(sys: &LindbladSystem, u: &CMatrix) -> Result<JMatrix> {
    check_unitary(u, sys.dim())?;
    Ok(j_matrix_unchecked(sys, u))
}

/// J(U) without the unitarity check; for hot loops over Haar samples.
pub fn j_matrix_unchecked(sys: &LindbladSystem, u: &CMatrix) -> JMatrix {
    let n = sys.dim();
    let ud = u.adjoint();
    let mut j = DMatrix::zeros(n, n);
    for v in sys.terms() {
        let rotated = &ud * v * u;
        for (dst, z) in j.iter_mut().zip(rotated.iter()) {
            *dst += z.norm_sqr();
        }
    }
    JMatrix(j)
}

pub fn induced_generator(j: &JMatrix) -> InducedGenerator {
    let mut g = j.0.clone();
    for (k, s) in j.col_sums().into_iter().enumerate() {
        g[(k, k)] -= s;
    }
    InducedGenerator(g)
}

/// λ̇ = −L_U λ.
pub fn apply_generator(g: &InducedGenerator, lam: &SimplexPoint) -> Result<TangentVector> {
    if g.dim() != lam.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: lam.dim(),
        });
    }
    Ok(TangentVector(apply_raw(&g.0, lam.as_slice())))
}

fn apply_raw(g: &DMatrix<f64>, lam: &[f64]) -> Vec<f64> {
    let v = g * DVector::from_column_slice(lam);
    v.iter().copied().collect()
}

/// Achievable derivative −L_U λ for one control.
pub fn derivative(sys: &LindbladSystem, u: &CMatrix, lam: &SimplexPoint) -> TangentVector {
    let g = induced_generator(&j_matrix_unchecked(sys, u));
    TangentVector(apply_raw(&g.0, lam.as_slice()))
}

/// `count` samples of −L_U λ with U Haar-distributed on SU(n).
pub fn derv_sample(
    sys: &LindbladSystem,
    lam: &SimplexPoint,
    count: usize,
    seed: u64,
) -> Result<Vec<TangentVector>> {
    if count == 0 {
        return Err(Error::InvalidParameter("sample count must be ≥ 1".into()));
    }
    if lam.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: lam.dim(),
        });
    }
    Ok(haar::map_haar(sys.dim(), count, seed, |u| derivative(sys, u, lam)))
}

/// How a [`UnitarySchedule`] is read between its samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitaryInterpolation {
    /// `unitaries[k]` is applied on `[times[k], times[k+1])`; jumps are
    /// instantaneous.
    PiecewiseConstant,
    /// Samples of a smooth curve U(t); derivatives by central differences.
    Smooth,
}

/// Control function t ↦ U(t) ∈ SU(n) given on a time grid.
#[derive(Debug, Clone)]
pub struct UnitarySchedule {
    times: Vec<f64>,
    unitaries: Vec<CMatrix>,
    interpolation: UnitaryInterpolation,
}

impl UnitarySchedule {
    pub fn new(
        times: Vec<f64>,
        unitaries: Vec<CMatrix>,
        interpolation: UnitaryInterpolation,
    ) -> Result<Self> {
        if times.is_empty() || times.len() != unitaries.len() {
            return Err(Error::MisalignedGrids(format!(
                "{} times for {} unitaries",
                times.len(),
                unitaries.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::MisalignedGrids("times must increase strictly".into()));
        }
        let n = unitaries[0].nrows();
        for u in &unitaries {
            check_unitary(u, n)?;
            let d = linalg::det(u);
            if (d - linalg::real(1.0)).norm() > UNITARY_TOL {
                return Err(Error::InvalidParameter(format!(
                    "schedule unitaries must lie in SU(n); det = {d}"
                )));
            }
        }
        Ok(Self {
            times,
            unitaries,
            interpolation,
        })
    }

    /// U(t) ≡ `u` (phase-fixed into SU(n)).
    pub fn constant(u: &CMatrix) -> Result<Self> {
        Self::new(
            vec![0.0],
            vec![to_special_unitary(u)],
            UnitaryInterpolation::PiecewiseConstant,
        )
    }

    /// Consecutive segments `(u, duration)`, each phase-fixed into SU(n).
    pub fn piecewise(segments: &[(CMatrix, f64)]) -> Result<Self> {
        let mut times = Vec::new();
        let mut unitaries = Vec::new();
        let mut t = 0.0;
        for (u, duration) in segments {
            if !(*duration >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "negative segment duration {duration}"
                )));
            }
            if *duration == 0.0 {
                continue;
            }
            times.push(t);
            unitaries.push(to_special_unitary(u));
            t += duration;
        }
        if times.is_empty() {
            let u = &segments.first().ok_or_else(|| {
                Error::InvalidParameter("schedule needs at least one segment".into())
            })?.0;
            return Self::constant(u);
        }
        Self::new(times, unitaries, UnitaryInterpolation::PiecewiseConstant)
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].nrows()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn interpolation(&self) -> UnitaryInterpolation {
        self.interpolation
    }

    /// Index of the sample in force at time `t` (piecewise-constant reading).
    fn index_at(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s <= t).saturating_sub(1)
    }

    /// U(t); smooth schedules return the nearest sample.
    pub fn unitary_at(&self, t: f64) -> &CMatrix {
        let k = self.index_at(t);
        match self.interpolation {
            UnitaryInterpolation::PiecewiseConstant => &self.unitaries[k],
            UnitaryInterpolation::Smooth => {
                if k + 1 < self.times.len() && t - self.times[k] > self.times[k + 1] - t {
                    &self.unitaries[k + 1]
                } else {
                    &self.unitaries[k]
                }
            }
        }
    }

    fn generator_at(&self, sys: &LindbladSystem, t: f64) -> DMatrix<f64> {
        let k = self.index_at(t);
        let g_k = induced_generator(&j_matrix_unchecked(sys, &self.unitaries[k])).0;
        if self.interpolation == UnitaryInterpolation::PiecewiseConstant
            || k + 1 >= self.times.len()
            || t <= self.times[k]
        {
            return g_k;
        }
        let w = ((t - self.times[k]) / (self.times[k + 1] - self.times[k])).min(1.0);
        let g_next = induced_generator(&j_matrix_unchecked(sys, &self.unitaries[k + 1])).0;
        g_k * (1.0 - w) + g_next * w
    }
}

/// RK4 on λ̇ = −L_{U(t)} λ with the sum renormalized after every step.
///
/// Steps are cut at the switching times of piecewise-constant schedules, so
/// every step sees a single generator.
pub fn integrate_reduced(
    sys: &LindbladSystem,
    lam0: &SimplexPoint,
    ctrl: &UnitarySchedule,
    t_end: f64,
    dt: f64,
) -> Result<Vec<(f64, SimplexPoint)>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!("t_end must be ≥ 0, got {t_end}")));
    }
    let n = sys.dim();
    if lam0.dim() != n || ctrl.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if lam0.dim() != n { lam0.dim() } else { ctrl.dim() },
        });
    }
    let eps = 1e-12 * dt.max(1.0);
    let piecewise = ctrl.interpolation == UnitaryInterpolation::PiecewiseConstant;
    let breaks: Vec<f64> = if piecewise {
        ctrl.times.iter().copied().filter(|&s| s > eps).collect()
    } else {
        Vec::new()
    };
    let mut next_break = 0;

    let mut lam = lam0.as_slice().to_vec();
    let mut t = 0.0;
    let mut out = vec![(0.0, lam0.clone())];
    while t < t_end - eps {
        while next_break < breaks.len() && breaks[next_break] <= t + eps {
            next_break += 1;
        }
        let mut h = dt.min(t_end - t);
        if next_break < breaks.len() {
            h = h.min(breaks[next_break] - t);
        }
        if t_end - (t + h) < eps {
            h = t_end - t;
        }

        let x = DVector::from_column_slice(&lam);
        let step = if piecewise {
            let g = ctrl.generator_at(sys, t + 0.5 * h);
            let k1 = &g * &x;
            let k2 = &g * (&x + &k1 * (0.5 * h));
            let k3 = &g * (&x + &k2 * (0.5 * h));
            let k4 = &g * (&x + &k3 * h);
            (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0)
        } else {
            let g0 = ctrl.generator_at(sys, t);
            let gm = ctrl.generator_at(sys, t + 0.5 * h);
            let g1 = ctrl.generator_at(sys, t + h);
            let k1 = &g0 * &x;
            let k2 = &gm * (&x + &k1 * (0.5 * h));
            let k3 = &gm * (&x + &k2 * (0.5 * h));
            let k4 = &g1 * (&x + &k3 * h);
            (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0)
        };
        let next = x + step;
        let sum: f64 = next.sum();
        lam = next.iter().map(|v| v / sum).collect();
        t += h;

        if let Some(&bad) = lam.iter().find(|&&v| v < -SIMPLEX_TOL) {
            return Err(Error::SimplexViolation { time: t, value: bad });
        }
        out.push((t, SimplexPoint::with_tolerance(lam.clone(), SIMPLEX_TOL, SIMPLEX_TOL)?));
    }
    Ok(out)
}

/// Hermitian H_c whose commutator term −i[H_c, ρ] cancels the component of
/// the dissipative drift −ΣΓ_{V_k}(ρ) tangent to the unitary orbit of ρ.
///
/// Computed as the Moore–Penrose solution ad_ρ(H_c) = i·D(ρ) in the
/// eigenbasis of ρ; degenerate eigenvalue pairs contribute nothing. The
/// Hamiltonian drift H₀ is not included (see [`lift_control`]).
pub fn compensating_hamiltonian(sys: &LindbladSystem, rho: &DensityMatrix) -> Result<CMatrix> {
    let drift = sys.dissipative_part(rho.matrix())?;
    let (vals, w) = linalg::hermitian_eigen(rho.matrix());
    let y = w.adjoint() * drift * linalg::I * &w;
    let n = vals.len();
    let mut x = linalg::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let gap = vals[i] - vals[j];
            if gap.abs() > DEGENERACY_TOL {
                x[(i, j)] = y[(i, j)] / gap;
            }
        }
    }
    Ok(linalg::hermitian_part(&(&w * x * w.adjoint())))
}

/// Initial full state U(0)·diag(λ₀)·U(0)* matching a reduced trajectory.
pub fn lifted_initial_state(lam0: &SimplexPoint, ctrl: &UnitarySchedule) -> DensityMatrix {
    DensityMatrix::from_spectrum(lam0, &ctrl.unitaries[0])
}

/// Full control schedule realizing a reduced solution.
///
/// H(t) = i·U̇(t)U(t)* + H_c(ρ(t)) − H₀ with ρ(t) = U(t)diag(λ(t))U(t)*.
/// Piecewise-constant schedules have U̇ = 0 between switches and turn every
/// switch into an instantaneous kick U_new·U_old*; smooth schedules must be
/// sampled on the same grid as `reduced` and are differentiated by central
/// differences. Start the full system from [`lifted_initial_state`].
pub fn lift_control(
    sys: &LindbladSystem,
    reduced: &[(f64, SimplexPoint)],
    ctrl: &UnitarySchedule,
) -> Result<ControlSchedule> {
    let n = sys.dim();
    if ctrl.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: ctrl.dim(),
        });
    }
    if reduced.is_empty() {
        return Err(Error::MisalignedGrids("empty reduced trajectory".into()));
    }
    // Kicked samples share a time stamp; keep the last sample per time.
    let mut samples: Vec<&(f64, SimplexPoint)> = Vec::with_capacity(reduced.len());
    for s in reduced {
        match samples.last() {
            Some(prev) if (s.0 - prev.0).abs() <= 1e-12 => {
                *samples.last_mut().expect("non-empty") = s;
            }
            _ => samples.push(s),
        }
    }

    match ctrl.interpolation {
        UnitaryInterpolation::PiecewiseConstant => {
            let mut times = Vec::with_capacity(samples.len());
            let mut hams = Vec::with_capacity(samples.len());
            for (t, lam) in samples.iter().map(|s| (&s.0, &s.1)) {
                let rho = DensityMatrix::from_spectrum(lam, ctrl.unitary_at(*t));
                times.push(*t);
                hams.push(compensating_hamiltonian(sys, &rho)? - sys.h0());
            }
            let mut schedule = ControlSchedule::sampled(times, hams, Interpolation::Linear)?;
            for k in 1..ctrl.times.len() {
                let kick = &ctrl.unitaries[k] * ctrl.unitaries[k - 1].adjoint();
                schedule = schedule.with_impulse(ctrl.times[k], kick)?;
            }
            Ok(schedule)
        }
        UnitaryInterpolation::Smooth => {
            if samples.len() != ctrl.times.len()
                || samples
                    .iter()
                    .zip(&ctrl.times)
                    .any(|(s, t)| (s.0 - t).abs() > 1e-9)
            {
                return Err(Error::MisalignedGrids(format!(
                    "reduced trajectory has {} samples, unitary schedule {}",
                    samples.len(),
                    ctrl.times.len()
                )));
            }
            let m = ctrl.times.len();
            let mut hams = Vec::with_capacity(m);
            for k in 0..m {
                let direct = if m == 1 {
                    linalg::zeros(n)
                } else {
                    let (lo, hi) = (k.saturating_sub(1), (k + 1).min(m - 1));
                    let du = (&ctrl.unitaries[hi] - &ctrl.unitaries[lo])
                        / linalg::real(ctrl.times[hi] - ctrl.times[lo]);
                    linalg::hermitian_part(&(du * ctrl.unitaries[k].adjoint() * linalg::I))
                };
                let rho = DensityMatrix::from_spectrum(&samples[k].1, &ctrl.unitaries[k]);
                hams.push(direct + compensating_hamiltonian(sys, &rho)? - sys.h0());
            }
            ControlSchedule::sampled(ctrl.times.clone(), hams, Interpolation::Linear)
        }
    }
}
