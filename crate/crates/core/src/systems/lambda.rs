use super::{make_lambda_system, permutation_vertices};
use crate::error::{Error, Result};
use crate::hull::distance_to_hull;
use crate::linalg::{self, real};
use crate::reduced::derivative;
use crate::simplex::{SimplexPoint, TangentVector};

/// Derivative of the Λ-system (γ₁ = γ₂ = 1) at λ = e₁ under the real rotation
/// mixing levels 1 and 2 with |U₁₁|² = x, together with its Euclidean distance
/// to conv{−L_P e₁}, the segment from 0 to (−2, 1, 1).
pub fn lambda_counterexample(x: f64) -> Result<(TangentVector, f64)> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("x must lie in [0, 1], got {x}")));
    }
    let sys = make_lambda_system(1.0, 1.0)?;
    let (cx, sy) = (x.sqrt(), (1.0 - x).sqrt());
    let mut u = linalg::identity(3);
    u[(0, 0)] = real(cx);
    u[(0, 1)] = real(-sy);
    u[(1, 0)] = real(sy);
    u[(1, 1)] = real(cx);
    let e1 = SimplexPoint::vertex(3, 0);
    let d = derivative(&sys, &u, &e1);
    let corners: Vec<Vec<f64>> = permutation_vertices(&sys, &e1)?.into_iter().map(|v| v.0).collect();
    let dist = distance_to_hull(&corners, d.as_slice());
    Ok((d, dist))
}
