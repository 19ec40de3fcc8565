//! Majorization, infinitesimal majorization, Schur-convex costs and the
//! optimal-derivative filter.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hull::Polytope;
use crate::lp::{LinearProgram, LpOutcome};
use crate::simplex::{SimplexPoint, TangentVector};

pub const MAJORIZATION_TOL: f64 = 1e-12;
/// Partial-sum slack a dominating point needs for a vertex to be discarded.
pub const DOMINANCE_TOL: f64 = 1e-9;

fn partial_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// λ ⪰ μ: sorted partial sums of λ dominate those of μ.
pub fn majorizes(lam: &SimplexPoint, mu: &SimplexPoint) -> Result<bool> {
    if lam.dim() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: lam.dim(),
            got: mu.dim(),
        });
    }
    let a = partial_sums(lam.sorted_desc().as_slice());
    let b = partial_sums(mu.sorted_desc().as_slice());
    Ok(a.iter().zip(&b).all(|(x, y)| x >= &(y - MAJORIZATION_TOL)))
}

/// v ⊵ w: unordered partial sums of v dominate those of w.
pub fn inf_majorizes(v: &TangentVector, w: &TangentVector) -> Result<bool> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            got: w.dim(),
        });
    }
    let a = partial_sums(v.as_slice());
    let b = partial_sums(w.as_slice());
    Ok(a.iter().zip(&b).all(|(x, y)| x >= &(y - MAJORIZATION_TOL)))
}

/// Cone of sum-zero vectors infinitesimally majorizing the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MajorizationCone {
    pub dim: usize,
}

impl MajorizationCone {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        v.len() == self.dim
            && v.iter().sum::<f64>().abs() <= tol
            && partial_sums(v).iter().all(|&s| s >= -tol)
    }
}

/// Schur-convex (purity, max eigenvalue) or Schur-concave (entropy) costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurCost {
    Purity,
    Entropy,
    MaxEigenvalue,
}

impl SchurCost {
    pub fn eval(self, lam: &SimplexPoint) -> f64 {
        let x = lam.as_slice();
        match self {
            SchurCost::Purity => x.iter().map(|v| v * v).sum(),
            SchurCost::Entropy => -x
                .iter()
                .filter(|&&v| v > 0.0)
                .map(|v| v * v.ln())
                .sum::<f64>(),
            SchurCost::MaxEigenvalue => x.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// True if larger values mean colder (more majorizing) states.
    pub fn increases_with_cooling(self) -> bool {
        !matches!(self, SchurCost::Entropy)
    }

    pub fn name(self) -> &'static str {
        match self {
            SchurCost::Purity => "purity",
            SchurCost::Entropy => "entropy",
            SchurCost::MaxEigenvalue => "max_eigenvalue",
        }
    }
}

impl fmt::Display for SchurCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchurCost {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "purity" => Ok(SchurCost::Purity),
            "entropy" => Ok(SchurCost::Entropy),
            "max_eigenvalue" | "max-eigenvalue" => Ok(SchurCost::MaxEigenvalue),
            other => Err(Error::UnknownCost(other.to_string())),
        }
    }
}

pub fn schur_cost(name: &str, lam: &SimplexPoint) -> Result<f64> {
    Ok(name.parse::<SchurCost>()?.eval(lam))
}

/// Whether some point of `conv(vertices)` strictly infinitesimally majorizes `v`.
fn is_dominated(vertices: &[Vec<f64>], v: &[f64]) -> bool {
    let n = v.len();
    let sums: Vec<Vec<f64>> = vertices.iter().map(|u| partial_sums(u)).collect();
    let target = partial_sums(v);
    let k_max = n.saturating_sub(1);
    let objective: Vec<f64> = sums.iter().map(|s| s[..k_max].iter().sum()).collect();
    let mut lp = LinearProgram::new(objective).eq(vec![1.0; vertices.len()], 1.0);
    for k in 0..k_max {
        lp = lp.ge(sums.iter().map(|s| s[k]).collect(), target[k]);
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => value - target[..k_max].iter().sum::<f64>() > DOMINANCE_TOL,
        _ => false,
    }
}

/// Vertices of `p` not strictly dominated under ⊴ by any point of `p`.
pub fn optimal_vertices(p: &Polytope) -> Vec<Vec<f64>> {
    let vertices = p.vertices();
    vertices
        .iter()
        .filter(|v| !is_dominated(vertices, v))
        .cloned()
        .collect()
}
