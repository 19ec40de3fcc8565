//! Points of the probability simplex and tangent vectors to it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entries above this (negative) threshold are clipped to zero.
pub const CLIP_TOL: f64 = 1e-12;
pub const SUM_TOL: f64 = 1e-12;

/// Eigenvalue vector of a density matrix: a point of the standard simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    /// Validates `lam`: entries ≥ −1e−12 (clipped to 0) summing to 1 within 1e−12.
    pub fn new(lam: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(lam, CLIP_TOL, SUM_TOL)
    }

    pub fn with_tolerance(mut lam: Vec<f64>, clip_tol: f64, sum_tol: f64) -> Result<Self> {
        if lam.is_empty() {
            return Err(Error::InvalidSimplexPoint("empty vector".into()));
        }
        if lam.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSimplexPoint("non-finite entry".into()));
        }
        if let Some(bad) = lam.iter().find(|&&x| x < -clip_tol) {
            return Err(Error::InvalidSimplexPoint(format!("negative entry {bad:e}")));
        }
        for x in lam.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let sum: f64 = lam.iter().sum();
        if (sum - 1.0).abs() > sum_tol {
            return Err(Error::InvalidSimplexPoint(format!("entries sum to {sum}")));
        }
        Ok(Self(lam))
    }

    /// Clips negative entries to zero and rescales to unit sum.
    pub fn normalized(mut lam: Vec<f64>) -> Result<Self> {
        for x in lam.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let sum: f64 = lam.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::InvalidSimplexPoint(format!("cannot normalize, sum {sum}")));
        }
        Ok(Self(lam.into_iter().map(|x| x / sum).collect()))
    }

    /// The simplex center (1/n, …, 1/n), i.e. the maximally mixed state.
    pub fn center(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    /// Vertex e_i (zero-based).
    pub fn vertex(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Copy with the entries in non-increasing order.
    pub fn sorted_desc(&self) -> Self {
        let mut v = self.0.clone();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        Self(v)
    }

    pub fn is_sorted_desc(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// True when all entries are pairwise separated by more than `tol`.
    pub fn is_regular(&self, tol: f64) -> bool {
        let s = self.sorted_desc();
        s.0.windows(2).all(|w| w[0] - w[1] > tol)
    }
}

impl std::ops::Index<usize> for SimplexPoint {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A derivative λ̇ at a simplex point; entries sum to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TangentVector(pub Vec<f64>);

impl TangentVector {
    pub fn new(v: Vec<f64>) -> Result<Self> {
        let sum: f64 = v.iter().sum();
        let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if sum.abs() > SUM_TOL * scale {
            return Err(Error::InvalidParameter(format!(
                "tangent vector entries sum to {sum:e}"
            )));
        }
        Ok(Self(v))
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Index<usize> for TangentVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}
