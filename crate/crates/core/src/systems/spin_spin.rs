//! Spin-spin system: optimal generators, cost-optimal schedules, the
//! conjectured facet description and the J(U) bound.
//!
//! At λ = (a, b, c, d) the optimal derivatives are (b, −b, d, −d), from the
//! permutation swapping levels 2 and 3, and (c, d, −c, −d), from the identity.
//! Both generators act on disjoint pairs of coordinates, so propagation is a
//! per-coordinate exponential.

use super::{make_spin_spin, CoolingSchedule, Segment};
use crate::error::{Error, Result};
use crate::hull::Halfspace;
use crate::linalg;
use crate::majorization::SchurCost;
use crate::reduced::{induced_generator, j_matrix, InducedGenerator, JMatrix};
use crate::simplex::SimplexPoint;

/// Permutation generating (b, −b, d, −d).
pub const SPIN_SPIN_FIRST: [usize; 4] = [0, 2, 1, 3];
/// Permutation generating (c, d, −c, −d).
pub const SPIN_SPIN_SECOND: [usize; 4] = [0, 1, 2, 3];

const GOLDEN_TOL: f64 = 1e-10;
const PRESCAN: usize = 64;

/// The two optimal rate matrices, in the order (first, second).
pub fn spin_spin_optimal_generators() -> (InducedGenerator, InducedGenerator) {
    let sys = make_spin_spin();
    let gen = |p: &[usize]| {
        induced_generator(&j_matrix(&sys, &linalg::permutation_matrix(p)).expect("permutation is unitary"))
    };
    (gen(&SPIN_SPIN_FIRST), gen(&SPIN_SPIN_SECOND))
}

/// Closed-form state after t₁ on the first generator and t₂ on the second.
pub fn spin_spin_final_state(lam0: &SimplexPoint, t1: f64, t2: f64) -> Result<SimplexPoint> {
    if lam0.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: lam0.dim(),
        });
    }
    if !(t1 >= 0.0 && t2 >= 0.0) {
        return Err(Error::InvalidParameter(format!("durations must be ≥ 0, got ({t1}, {t2})")));
    }
    let [mut a, mut b, mut c, mut d] = [lam0[0], lam0[1], lam0[2], lam0[3]];
    // First generator: b → a and d → c at unit rate.
    let e = (-t1).exp();
    (a, b, c, d) = (a + b * (1.0 - e), b * e, c + d * (1.0 - e), d * e);
    // Second generator: c → a and d → b at unit rate.
    let e = (-t2).exp();
    (a, b, c, d) = (a + c * (1.0 - e), b + d * (1.0 - e), c * e, d * e);
    SimplexPoint::new(vec![a, b, c, d])
}

/// Splits the budget T = t₁ + t₂ to minimize the cost (entropy) or maximize
/// it (purity, largest eigenvalue) at the final state. λ₀ is sorted on input.
pub fn spin_spin_schedule(lam0: &SimplexPoint, cost: SchurCost, budget: f64) -> Result<CoolingSchedule> {
    if !(budget > 0.0) || !budget.is_finite() {
        return Err(Error::InvalidParameter(format!("budget must be positive, got {budget}")));
    }
    let lam0 = lam0.sorted_desc();
    let sign = if cost.increases_with_cooling() { -1.0 } else { 1.0 };
    let objective = |t1: f64| {
        let t1 = t1.clamp(0.0, budget);
        let fin = spin_spin_final_state(&lam0, t1, budget - t1).expect("valid durations");
        sign * cost.eval(&fin)
    };

    // Coarse scan to bracket the minimum, then golden-section refinement.
    let step = budget / PRESCAN as f64;
    let (best_k, _) = (0..=PRESCAN)
        .map(|k| (k, objective(k as f64 * step)))
        .fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });
    let mut lo = (best_k.saturating_sub(1)) as f64 * step;
    let mut hi = ((best_k + 1).min(PRESCAN)) as f64 * step;
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    while hi - lo > GOLDEN_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = objective(x2);
        }
    }
    let mut t1 = 0.5 * (lo + hi);
    // The optimum may sit on the boundary of the slice.
    for edge in [0.0, budget] {
        if objective(edge) <= objective(t1) {
            t1 = edge;
        }
    }
    CoolingSchedule::new(vec![
        Segment {
            permutation: SPIN_SPIN_FIRST.to_vec(),
            duration: t1,
        },
        Segment {
            permutation: SPIN_SPIN_SECOND.to_vec(),
            duration: budget - t1,
        },
    ])
}

/// J_ij ≥ 0, (J + Jᵀ)𝟙 = 𝟙 and J_ii ≤ ¼, each to 1e−9.
pub fn spin_spin_j_check(j: &JMatrix) -> bool {
    const TOL: f64 = 1e-9;
    let m = j.matrix();
    if m.nrows() != 4 || m.ncols() != 4 {
        return false;
    }
    let sums_ok = j
        .row_sums()
        .iter()
        .zip(j.col_sums())
        .all(|(r, c)| (r + c - 1.0).abs() <= TOL);
    m.iter().all(|&x| x >= -TOL) && sums_ok && (0..4).all(|i| m[(i, i)] <= 0.25 + TOL)
}

/// The 8 facets of conv{−L_P λ}: λ̇_i ≥ −λ_i for each i, and for each
/// distinguished entry a with the others sorted b ≥ c ≥ d,
/// ȧ(b + d) − ḃ(c − b) − b(c + d) ≤ 0. Hexagonal facets come first.
pub fn spin_spin_facets(lam: &SimplexPoint) -> Result<Vec<Halfspace>> {
    if lam.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: lam.dim(),
        });
    }
    if !lam.is_regular(1e-12) {
        return Err(Error::InvalidSimplexPoint(format!(
            "facet description needs distinct eigenvalues, got {:?}",
            lam.as_slice()
        )));
    }
    let x = lam.as_slice();
    let mut facets = Vec::with_capacity(8);
    for i in 0..4 {
        let mut normal = vec![0.0; 4];
        normal[i] = -1.0;
        facets.push(Halfspace {
            normal,
            offset: x[i],
        });
    }
    for i in 0..4 {
        let mut rest: Vec<usize> = (0..4).filter(|&k| k != i).collect();
        rest.sort_by(|&p, &q| x[q].total_cmp(&x[p]));
        let (ib, ic, id) = (rest[0], rest[1], rest[2]);
        let (b, c, d) = (x[ib], x[ic], x[id]);
        let mut normal = vec![0.0; 4];
        normal[i] = b + d;
        normal[ib] = -(c - b);
        facets.push(Halfspace {
            normal,
            offset: b * (c + d),
        });
    }
    Ok(facets)
}
