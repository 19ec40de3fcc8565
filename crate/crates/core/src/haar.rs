//! Seeded Haar sampling on SU(n).
//!
//! Every sample index draws from its own ChaCha stream derived from the seed,
//! so parallel sampling returns the same values regardless of thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::linalg::{self, c, CMatrix};

/// Deterministic RNG for sample `stream` under `seed`.
pub fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Multiplies `u` by a global phase so that det(u) = 1.
pub fn to_special_unitary(u: &CMatrix) -> CMatrix {
    let n = u.nrows() as f64;
    let d = linalg::det(u);
    u * num_complex::Complex64::from_polar(1.0, -d.arg() / n)
}

/// Haar-random element of SU(n) drawn from `rng`: QR of a complex Ginibre
/// matrix with the phases of R's diagonal moved into Q.
pub fn haar_unitary_from<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    assert!(n >= 1, "dimension must be positive");
    let z = CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    });
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    to_special_unitary(&u)
}

/// Haar-random element of SU(n), deterministic in `seed`.
pub fn haar_unitary(n: usize, seed: u64) -> CMatrix {
    haar_unitary_from(n, &mut sample_rng(seed, 0))
}

/// `count` independent Haar samples; sample `i` uses stream `i` of `seed`.
pub fn haar_samples(n: usize, count: usize, seed: u64) -> Vec<CMatrix> {
    (0..count)
        .into_par_iter()
        .map(|i| haar_unitary_from(n, &mut sample_rng(seed, i as u64)))
        .collect()
}

/// Maps `f` over `count` Haar samples in parallel, deterministically in `seed`.
pub fn map_haar<T, F>(n: usize, count: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&CMatrix) -> T + Sync + Send,
{
    (0..count)
        .into_par_iter()
        .map(|i| f(&haar_unitary_from(n, &mut sample_rng(seed, i as u64))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_seed() {
        assert_eq!(haar_unitary(3, 7), haar_unitary(3, 7));
        assert_ne!(haar_unitary(3, 7), haar_unitary(3, 8));
    }

    #[test]
    fn unitary_with_unit_determinant() {
        for n in 2..=4 {
            for seed in 0..20 {
                let u = haar_unitary(n, seed);
                assert!(linalg::unitarity_error(&u) < 1e-10);
                assert!((linalg::det(&u) - c(1.0, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn first_moment_matches_haar() {
        // E|u₁₁|² = 1/n; Var|u₁₁|² = 1/12 for n = 2 (uniform on [0,1]).
        let count = 10_000;
        let xs = map_haar(2, count, 11, |u| u[(0, 0)].norm_sqr());
        let mean = xs.iter().sum::<f64>() / count as f64;
        let sigma = (1.0f64 / 12.0).sqrt() / (count as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn parallel_samples_match_sequential() {
        let par = haar_samples(3, 16, 5);
        for (i, u) in par.iter().enumerate() {
            assert_eq!(u, &haar_unitary_from(3, &mut sample_rng(5, i as u64)));
        }
    }
}
