//! Time-optimal cooling of the V-system to a largest eigenvalue 1 − ε.
//!
//! At sorted λ = (a, b, c) the optimal derivatives are
//! (γ₂b + γ₁c, −γ₂b, −γ₁c), produced by the permutation swapping levels 2 and
//! 3, and (γ₁b + γ₂c, −γ₁b, −γ₂c), produced by the identity. The two
//! generators commute, so only the time spent on each matters.

use super::{CoolingSchedule, Segment};
use crate::error::{Error, Result};
use crate::simplex::SimplexPoint;

/// Permutation driving b at rate γ₂ and c at rate γ₁.
pub const V_FIRST: [usize; 3] = [0, 2, 1];
/// Permutation driving b at rate γ₁ and c at rate γ₂.
pub const V_SECOND: [usize; 3] = [0, 1, 2];

/// Closed-form state after t₁ on the first generator and t₂ on the second.
pub fn v_final_state(g1: f64, g2: f64, lam0: &SimplexPoint, t1: f64, t2: f64) -> Result<SimplexPoint> {
    if lam0.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: lam0.dim(),
        });
    }
    if !(t1 >= 0.0 && t2 >= 0.0) {
        return Err(Error::InvalidParameter(format!("durations must be ≥ 0, got ({t1}, {t2})")));
    }
    let (a, b, c) = (lam0[0], lam0[1], lam0[2]);
    let eb = (-(g2 * t1 + g1 * t2)).exp();
    let ec = (-(g1 * t1 + g2 * t2)).exp();
    SimplexPoint::new(vec![a + (1.0 - eb) * b + (1.0 - ec) * c, eb * b, ec * c])
}

/// ε above which the unconstrained optimum would need t₂ < 0.
pub fn v_clamp_threshold(g1: f64, g2: f64, b0: f64, c0: f64) -> f64 {
    2.0 * b0 * (c0 / b0).powf(g2 / (g2 - g1))
}

/// Shortest schedule reaching b + c = ε from λ₀ (sorted on input).
///
/// Returns `[(V_FIRST, t₁), (V_SECOND, t₂)]`.
pub fn v_schedule(g1: f64, g2: f64, lam0: &SimplexPoint, eps: f64) -> Result<CoolingSchedule> {
    super::check_rates(g1, g2)?;
    if g1 >= g2 {
        return Err(Error::InvalidParameter(format!(
            "need γ₁ < γ₂ (equal rates make the problem trivial), got ({g1}, {g2})"
        )));
    }
    if lam0.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: lam0.dim(),
        });
    }
    let sorted = lam0.sorted_desc();
    let (b0, c0) = (sorted[1], sorted[2]);
    if !(eps > 0.0 && eps < b0 + c0) {
        return Err(Error::InvalidParameter(format!(
            "ε must lie in (0, b₀ + c₀) = (0, {}), got {eps}",
            b0 + c0
        )));
    }

    let clamped = c0 <= 0.0 || eps > v_clamp_threshold(g1, g2, b0, c0);
    let (t1, t2) = if clamped {
        (clamped_time(g1, g2, b0, c0, eps), 0.0)
    } else {
        let lb = (2.0 * b0 / eps).ln();
        let lc = (2.0 * c0 / eps).ln();
        let t1 = (g2 * lb - g1 * lc) / (g2 * g2 - g1 * g1);
        let t2 = (g1 * lb - g2 * lc) / (g1 * g1 - g2 * g2);
        (t1.max(0.0), t2.max(0.0))
    };
    CoolingSchedule::new(vec![
        Segment {
            permutation: V_FIRST.to_vec(),
            duration: t1,
        },
        Segment {
            permutation: V_SECOND.to_vec(),
            duration: t2,
        },
    ])
}

/// Root of e^{−γ₂t}b₀ + e^{−γ₁t}c₀ = ε by bisection.
fn clamped_time(g1: f64, g2: f64, b0: f64, c0: f64, eps: f64) -> f64 {
    let f = |t: f64| (-g2 * t).exp() * b0 + (-g1 * t).exp() * c0 - eps;
    let mut lo = 0.0;
    let mut hi = 50.0 / g1;
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
