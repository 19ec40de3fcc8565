use itertools::Itertools;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::haar;
use crate::hull::Halfspace;
use crate::linalg::{self, c, CMatrix, CVector};
use crate::quantum::LindbladSystem;
use crate::reduced::{j_matrix_unchecked, JMatrix};

/// Linear inequalities on the entries of J (row-major, n² variables) valid
/// for every J(U): nonnegativity plus the four majorization conditions
/// J𝟙 ≺ spec ΣVV*, Jᵀ𝟙 ≺ spec ΣV*V, (J + Jᵀ)𝟙 ≺ spec Σ{V, V*} and
/// (J − Jᵀ)𝟙 ≺ spec Σ[V, V*], each expanded over all coordinate subsets.
#[derive(Debug, Clone)]
pub struct JBound {
    pub n: usize,
    pub halfspaces: Vec<Halfspace>,
    /// Short description of each halfspace, for diagnostics.
    pub labels: Vec<String>,
}

impl JBound {
    /// Largest violation `normal · J − offset` over all halfspaces.
    pub fn max_violation(&self, j: &JMatrix) -> f64 {
        let flat: Vec<f64> = j.matrix().transpose().iter().copied().collect();
        self.halfspaces
            .iter()
            .map(|h| -h.slack(&flat))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, j: &JMatrix, tol: f64) -> bool {
        j.dim() == self.n && self.max_violation(j) <= tol
    }

    /// Worst violation over `count` Haar-sampled J(U).
    pub fn sampled_violation(&self, sys: &LindbladSystem, count: usize, seed: u64) -> f64 {
        haar::map_haar(sys.dim(), count, seed, |u| self.max_violation(&j_matrix_unchecked(sys, u)))
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn j_polytope_bound(sys: &LindbladSystem) -> JBound {
    let n = sys.dim();
    let sum = |f: &dyn Fn(&CMatrix) -> CMatrix| {
        sys.terms().iter().fold(linalg::zeros(n), |acc, v| acc + f(v))
    };
    let vv = sum(&|v| v * v.adjoint());
    let v_v = sum(&|v| v.adjoint() * v);
    let anti = sum(&|v| linalg::anticommutator(v, &v.adjoint()));
    let comm = sum(&|v| linalg::commutator(v, &v.adjoint()));

    let var = |i: usize, j: usize| i * n + j;
    // Gradient of the i-th entry of each vector-valued map in J.
    let row = |i: usize| {
        let mut g = vec![0.0; n * n];
        (0..n).for_each(|j| g[var(i, j)] += 1.0);
        g
    };
    let col = |i: usize| {
        let mut g = vec![0.0; n * n];
        (0..n).for_each(|j| g[var(j, i)] += 1.0);
        g
    };
    let conditions: [(&str, CMatrix, Box<dyn Fn(usize) -> Vec<f64>>); 4] = [
        ("rows", vv, Box::new(row)),
        ("cols", v_v, Box::new(col)),
        ("rows+cols", anti, Box::new(move |i| row(i).iter().zip(col(i)).map(|(a, b)| a + b).collect())),
        ("rows-cols", comm, Box::new(move |i| row(i).iter().zip(col(i)).map(|(a, b)| a - b).collect())),
    ];

    let mut halfspaces = Vec::new();
    let mut labels = Vec::new();
    for (name, matrix, grad) in conditions {
        let spec = linalg::hermitian_eigenvalues(&matrix);
        let grads: Vec<Vec<f64>> = (0..n).map(&grad).collect();
        let combine = |subset: &[usize]| {
            let mut g = vec![0.0; n * n];
            for &i in subset {
                g.iter_mut().zip(&grads[i]).for_each(|(a, b)| *a += b);
            }
            g
        };
        for k in 1..n {
            let cap: f64 = spec[..k].iter().sum();
            for subset in (0..n).combinations(k) {
                halfspaces.push(Halfspace {
                    normal: combine(&subset),
                    offset: cap,
                });
                labels.push(format!("{name} {subset:?} ≤ top-{k}"));
            }
        }
        let all: Vec<usize> = (0..n).collect();
        let total: f64 = spec.iter().sum();
        let g = combine(&all);
        halfspaces.push(Halfspace {
            normal: g.clone(),
            offset: total,
        });
        labels.push(format!("{name} total ≤"));
        halfspaces.push(Halfspace {
            normal: g.into_iter().map(|x| -x).collect(),
            offset: -total,
        });
        labels.push(format!("{name} total ≥"));
    }
    for i in 0..n {
        for j in 0..n {
            let mut g = vec![0.0; n * n];
            g[var(i, j)] = -1.0;
            halfspaces.push(Halfspace { normal: g, offset: 0.0 });
            labels.push(format!("J[{i},{j}] ≥ 0"));
        }
    }
    JBound { n, halfspaces, labels }
}

/// ‖Vu‖² − |u*Vu|², the outflow from the level spanned by u.
fn outflow(v: &CMatrix, u: &CVector) -> f64 {
    let vu = v * u;
    vu.norm_squared() - u.dotc(&vu).norm_sqr()
}

/// Estimate of f⋆ = max_U Σ_{j≠i} J(U)_{ji} for a single-term system, the
/// scale of derv(e_i) = f⋆·conv{0, e_j − e_i}. Haar sampling seeds a
/// stochastic hill climb over the unit vector U e_i.
pub fn derv_vertex_fstar(sys: &LindbladSystem, i: usize, sample_count: usize, seed: u64) -> Result<f64> {
    let [v] = sys.terms() else {
        return Err(Error::InvalidParameter(format!(
            "needs exactly one Lindblad term, got {}",
            sys.terms().len()
        )));
    };
    let n = sys.dim();
    if i >= n {
        return Err(Error::InvalidParameter(format!("vertex index {i} out of range for n = {n}")));
    }
    if linalg::max_abs(v) == 0.0 {
        return Err(Error::InvalidParameter("the Lindblad term vanishes".into()));
    }
    if sample_count == 0 {
        return Err(Error::InvalidParameter("sample count must be ≥ 1".into()));
    }
    let candidates = haar::map_haar(n, sample_count, seed, |u| {
        let col: CVector = u.column(i).into_owned();
        (outflow(v, &col), col)
    });
    let (mut best, mut u) = candidates
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one sample");

    let mut rng = haar::sample_rng(seed, u64::MAX);
    let mut sigma = 0.1;
    for _ in 0..100_000 {
        if sigma < 1e-10 {
            break;
        }
        let step = CVector::from_fn(n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let trial = &u + step * c(sigma, 0.0);
        let trial = &trial / c(trial.norm(), 0.0);
        let value = outflow(v, &trial);
        if value > best {
            best = value;
            u = trial;
            sigma *= 1.5;
        } else {
            sigma *= 0.9;
        }
    }
    Ok(best)
}
