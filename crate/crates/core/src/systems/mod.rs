//! The Λ-system, V-system and spin-spin model, with their schedules, polytope
//! bounds and checks.

mod bounds;
mod conjecture;
mod lambda;
mod spin_spin;
mod vsys;

pub use bounds::{derv_vertex_fstar, j_polytope_bound, JBound};
pub use conjecture::{
    planted_self_test, random_regular_point, verify_conjecture, ConjectureReport, SelfTestReport,
    Witness,
};
pub use lambda::lambda_counterexample;
pub use spin_spin::{
    spin_spin_facets, spin_spin_final_state, spin_spin_j_check, spin_spin_optimal_generators,
    spin_spin_schedule, SPIN_SPIN_FIRST, SPIN_SPIN_SECOND,
};
pub use vsys::{v_clamp_threshold, v_final_state, v_schedule, V_FIRST, V_SECOND};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, real, CMatrix};
use crate::quantum::LindbladSystem;
use crate::reduced::{self, integrate_reduced, UnitarySchedule};
use crate::simplex::{SimplexPoint, TangentVector};

/// Points closer than this are treated as one vertex.
pub const VERTEX_MERGE_TOL: f64 = 1e-12;

fn check_rates(g1: f64, g2: f64) -> Result<()> {
    if g1 > 0.0 && g2 > 0.0 && g1.is_finite() && g2.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("rates must be positive, got ({g1}, {g2})")))
    }
}

/// Λ-system: decay 1 → 2 at rate γ₁ and 1 → 3 at rate γ₂ (terms √γ₁E₂₁, √γ₂E₃₁).
pub fn make_lambda_system(g1: f64, g2: f64) -> Result<LindbladSystem> {
    check_rates(g1, g2)?;
    LindbladSystem::dissipative(vec![
        linalg::ket_bra(3, 1, 0) * real(g1.sqrt()),
        linalg::ket_bra(3, 2, 0) * real(g2.sqrt()),
    ])
}

/// V-system: decay 2 → 1 at rate γ₁ and 3 → 1 at rate γ₂ (terms √γ₁E₁₂, √γ₂E₁₃).
pub fn make_v_system(g1: f64, g2: f64) -> Result<LindbladSystem> {
    check_rates(g1, g2)?;
    LindbladSystem::dissipative(vec![
        linalg::ket_bra(3, 0, 1) * real(g1.sqrt()),
        linalg::ket_bra(3, 0, 2) * real(g2.sqrt()),
    ])
}

/// Two qubits with the single term σ₋ ⊗ 1.
pub fn make_spin_spin() -> LindbladSystem {
    LindbladSystem::dissipative(vec![linalg::kron(&linalg::sigma_minus(), &linalg::identity(2))])
        .expect("valid fixed system")
}

/// The distinct derivatives −L_P λ over all n! permutation matrices P.
pub fn permutation_vertices(sys: &LindbladSystem, lam: &SimplexPoint) -> Result<Vec<TangentVector>> {
    let n = sys.dim();
    if lam.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: lam.dim(),
        });
    }
    let mut out: Vec<TangentVector> = Vec::new();
    for perm in (0..n).permutations(n) {
        let d = reduced::derivative(sys, &linalg::permutation_matrix(&perm), lam);
        let fresh = out.iter().all(|v| {
            v.as_slice()
                .iter()
                .zip(d.as_slice())
                .any(|(a, b)| (a - b).abs() > VERTEX_MERGE_TOL)
        });
        if fresh {
            out.push(d);
        }
    }
    Ok(out)
}

/// One constant-control stretch of a cooling schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    /// P e_j = e_{permutation[j]}.
    pub permutation: Vec<usize>,
    pub duration: f64,
}

/// Piecewise-constant permutation controls for the reduced system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoolingSchedule {
    pub segments: Vec<Segment>,
    pub total_time: f64,
}

impl CoolingSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let Some(n) = segments.first().map(|s| s.permutation.len()) else {
            return Err(Error::InvalidParameter("schedule needs a segment".into()));
        };
        for s in &segments {
            if !(s.duration >= 0.0) || !s.duration.is_finite() {
                return Err(Error::InvalidParameter(format!("bad duration {}", s.duration)));
            }
            let mut seen = vec![false; n];
            let valid = s.permutation.len() == n
                && s.permutation.iter().all(|&p| p < n && !std::mem::replace(&mut seen[p], true));
            if !valid {
                return Err(Error::InvalidParameter(format!(
                    "{:?} is not a permutation of 0..{n}",
                    s.permutation
                )));
            }
        }
        let total_time = segments.iter().map(|s| s.duration).sum();
        Ok(Self {
            segments,
            total_time,
        })
    }

    pub fn durations(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.duration).collect()
    }

    pub fn unitary_schedule(&self) -> Result<UnitarySchedule> {
        let parts: Vec<(CMatrix, f64)> = self
            .segments
            .iter()
            .map(|s| (linalg::permutation_matrix(&s.permutation), s.duration))
            .collect();
        UnitarySchedule::piecewise(&parts)
    }

    /// RK4 trajectory of the reduced system under this schedule.
    pub fn integrate(
        &self,
        sys: &LindbladSystem,
        lam0: &SimplexPoint,
        dt: f64,
    ) -> Result<Vec<(f64, SimplexPoint)>> {
        integrate_reduced(sys, lam0, &self.unitary_schedule()?, self.total_time, dt)
    }
}
