//! Monte-Carlo test of the spin-spin conjecture conv(derv(λ)) = conv{−L_P λ}.

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{lambda_counterexample, make_lambda_system, make_spin_spin, permutation_vertices, spin_spin_facets};
use crate::config::{matrix_to_json, MatrixJson};
use crate::error::Result;
use crate::haar;
use crate::hull::convex_hull;
use crate::reduced::derivative;
use crate::simplex::SimplexPoint;

/// Facet violations at or below this count as consistent with the conjecture.
pub const CONJECTURE_TOL: f64 = 1e-9;
/// Random points closer than this to a repeated eigenvalue are redrawn.
const REGULARITY_GAP: f64 = 1e-3;

/// The sample attaining the largest facet violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub lambda: Vec<f64>,
    pub unitary: MatrixJson,
    pub derivative: Vec<f64>,
    pub facet: usize,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub lam_count: usize,
    pub sample_count: usize,
    /// Total derivatives tested.
    pub samples: usize,
    pub tolerance: f64,
    /// `None` when nothing was sampled.
    pub max_facet_violation: Option<f64>,
    pub consistent: bool,
    pub worst_case: Option<Witness>,
}

/// Checker sanity test: a Λ-system derivative against its permutation hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfTestReport {
    pub lambda: Vec<f64>,
    pub derivative: Vec<f64>,
    pub violation: f64,
    pub flagged: bool,
}

/// Flat-Dirichlet point whose entries differ pairwise by at least 1e−3.
pub fn random_regular_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SimplexPoint {
    loop {
        let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = raw.iter().sum();
        let lam: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let mut sorted = lam.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        if sorted.windows(2).all(|w| w[0] - w[1] >= REGULARITY_GAP) {
            return SimplexPoint::normalized(lam).expect("positive weights");
        }
    }
}

/// Draws `lam_count` regular λ and `sample_count` Haar unitaries per λ, and
/// reports the largest violation of the conjectured facets.
///
/// λ point k uses its own random stream, so the report does not depend on
/// thread scheduling.
pub fn verify_conjecture(lam_count: usize, sample_count: usize, seed: u64) -> Result<ConjectureReport> {
    let sys = make_spin_spin();
    let per_point: Vec<Option<Witness>> = (0..lam_count)
        .into_par_iter()
        .map(|k| -> Result<Option<Witness>> {
            let mut rng = haar::sample_rng(seed, k as u64);
            let lam = random_regular_point(&mut rng, 4);
            let facets = spin_spin_facets(&lam)?;
            let mut worst: Option<Witness> = None;
            for _ in 0..sample_count {
                let u = haar::haar_unitary_from(4, &mut rng);
                let d = derivative(&sys, &u, &lam);
                let (facet, violation) = facets
                    .iter()
                    .map(|f| -f.slack(d.as_slice()))
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
                if worst.as_ref().is_none_or(|w| violation > w.violation) {
                    worst = Some(Witness {
                        lambda: lam.as_slice().to_vec(),
                        unitary: matrix_to_json(&u),
                        derivative: d.0,
                        facet,
                        violation,
                    });
                }
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;

    let worst = per_point
        .into_iter()
        .flatten()
        .fold(None::<Witness>, |acc, w| match acc {
            Some(a) if a.violation >= w.violation => Some(a),
            _ => Some(w),
        });
    let max = worst.as_ref().map(|w| w.violation);
    Ok(ConjectureReport {
        lam_count,
        sample_count,
        samples: lam_count * sample_count,
        tolerance: CONJECTURE_TOL,
        max_facet_violation: max,
        consistent: max.is_none_or(|v| v <= CONJECTURE_TOL),
        worst_case: worst.filter(|w| w.violation > CONJECTURE_TOL),
    })
}

/// Feeds the Λ-system derivative at e₁ (x = ½) to the polytope checker built
/// from its permutation images; a working checker flags it.
pub fn planted_self_test() -> Result<SelfTestReport> {
    let sys = make_lambda_system(1.0, 1.0)?;
    let e1 = SimplexPoint::vertex(3, 0);
    let corners: Vec<Vec<f64>> = permutation_vertices(&sys, &e1)?.into_iter().map(|v| v.0).collect();
    let hull = convex_hull(&corners)?;
    let (d, _) = lambda_counterexample(0.5)?;
    let violation = hull.violation(d.as_slice());
    Ok(SelfTestReport {
        lambda: e1.into_vec(),
        derivative: d.0,
        violation,
        flagged: violation > CONJECTURE_TOL,
    })
}
