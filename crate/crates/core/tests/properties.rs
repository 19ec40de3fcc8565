use coolcore::haar;
use coolcore::linalg::{self, max_abs};
use coolcore::majorization::{inf_majorizes, majorizes, MajorizationCone, SchurCost};
use coolcore::quantum::{DensityMatrix, LindbladSystem};
use coolcore::qubit::{lambda0, mu, opt_path, t0, v_tilde};
use coolcore::reduced::{apply_generator, compensating_hamiltonian, induced_generator, j_matrix};
use coolcore::simplex::{SimplexPoint, TangentVector};
use coolcore::systems::{make_lambda_system, make_spin_spin, make_v_system};
use proptest::prelude::*;

fn simplex(n: usize) -> impl Strategy<Value = SimplexPoint> {
    prop::collection::vec(0.001f64..1.0, n).prop_map(|w| SimplexPoint::normalized(w).unwrap())
}

/// Doubly stochastic mixing moves a point down in the majorization order.
fn mix(lam: &SimplexPoint, t: f64) -> SimplexPoint {
    let x = lam.as_slice();
    let n = x.len();
    let mixed = (0..n).map(|i| (1.0 - t) * x[i] + t * x[(i + 1) % n]).collect();
    SimplexPoint::normalized(mixed).unwrap()
}

fn systems() -> Vec<LindbladSystem> {
    vec![
        LindbladSystem::dissipative(vec![v_tilde(0.5)]).unwrap(),
        make_lambda_system(1.0, 2.0).unwrap(),
        make_v_system(1.0, 2.0).unwrap(),
        make_spin_spin(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn majorization_is_reflexive(lam in simplex(4)) {
        prop_assert!(majorizes(&lam, &lam).unwrap());
    }

    #[test]
    fn majorization_is_transitive(lam in simplex(4), s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let mid = mix(&lam, s);
        let low = mix(&mid, t);
        prop_assert!(majorizes(&lam, &mid).unwrap());
        prop_assert!(majorizes(&mid, &low).unwrap());
        prop_assert!(majorizes(&lam, &low).unwrap());
    }

    #[test]
    fn schur_costs_are_monotone(lam in simplex(4), t in 0.0f64..1.0) {
        let lower = mix(&lam, t);
        for cost in [SchurCost::Purity, SchurCost::Entropy, SchurCost::MaxEigenvalue] {
            let (hi, lo) = (cost.eval(&lam), cost.eval(&lower));
            if cost.increases_with_cooling() {
                prop_assert!(hi >= lo - 1e-12, "{cost}: {hi} < {lo}");
            } else {
                prop_assert!(hi <= lo + 1e-12, "{cost}: {hi} > {lo}");
            }
        }
    }

    #[test]
    fn inf_majorization_matches_cone(v in prop::collection::vec(-1.0f64..1.0, 4)) {
        let mean = v.iter().sum::<f64>() / 4.0;
        let v: Vec<f64> = v.iter().map(|x| x - mean).collect();
        let tv = TangentVector::new(v.clone()).unwrap();
        let inside = inf_majorizes(&tv, &TangentVector::zero(4)).unwrap();
        prop_assert_eq!(inside, MajorizationCone::new(4).contains(&v, 1e-12));
    }

    #[test]
    fn generator_columns_sum_to_zero(seed in any::<u64>()) {
        for sys in systems() {
            let u = haar::haar_unitary(sys.dim(), seed);
            let g = induced_generator(&j_matrix(&sys, &u).unwrap());
            for col in g.0.column_iter() {
                prop_assert!(col.sum().abs() < 1e-12);
            }
            for i in 0..g.0.nrows() {
                for j in 0..g.0.ncols() {
                    if i != j {
                        prop_assert!(g.0[(i, j)] >= 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn derivatives_are_tangent(seed in any::<u64>(), w in prop::collection::vec(0.01f64..1.0, 4)) {
        let sys = make_spin_spin();
        let lam = SimplexPoint::normalized(w).unwrap();
        let u = haar::haar_unitary(4, seed);
        let d = apply_generator(&induced_generator(&j_matrix(&sys, &u).unwrap()), &lam).unwrap();
        prop_assert!(d.as_slice().iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn diagonal_states_need_no_compensation(w in prop::collection::vec(0.01f64..1.0, 3)) {
        let lam = SimplexPoint::normalized(w).unwrap();
        for sys in [make_lambda_system(1.0, 2.0).unwrap(), make_v_system(1.0, 2.0).unwrap()] {
            let h = compensating_hamiltonian(&sys, &DensityMatrix::diagonal(&lam)).unwrap();
            prop_assert!(max_abs(&h) < 1e-12);
        }
    }

    #[test]
    fn optimal_path_is_monotone(nu in 0.0f64..0.95, t in 0.0f64..5.0, dt in 0.001f64..1.0) {
        let (a, _) = opt_path(nu, t);
        let (b, _) = opt_path(nu, t + dt);
        prop_assert!(b >= a - 1e-12);
        prop_assert!(b <= 1.0 + 1e-12);
        prop_assert!(mu(nu, a) >= -1e-12);
    }

    #[test]
    fn switch_time_reaches_switch_point(nu in 0.05f64..0.95) {
        let (lam, _) = opt_path(nu, t0(nu));
        prop_assert!((lam - lambda0(nu)).abs() < 1e-9, "{lam} vs {}", lambda0(nu));
    }
}

#[test]
fn spin_spin_diagonal_states_need_no_compensation() {
    let sys = make_spin_spin();
    let mut rng = haar::sample_rng(17, 0);
    for _ in 0..100 {
        let w: Vec<f64> = (0..4).map(|_| rand::Rng::random_range(&mut rng, 0.01..1.0)).collect();
        let lam = SimplexPoint::normalized(w).unwrap();
        let h = compensating_hamiltonian(&sys, &DensityMatrix::diagonal(&lam)).unwrap();
        assert!(max_abs(&h) < 1e-12);
    }
}

#[test]
fn compensated_diagonal_evolution_stays_diagonal() {
    let sys = make_v_system(1.0, 2.0).unwrap();
    let lam = SimplexPoint::new(vec![0.5, 0.3, 0.2]).unwrap();
    let rho = DensityMatrix::diagonal(&lam);
    let drift = sys.dissipative_part(rho.matrix()).unwrap();
    let off: f64 = (0..3)
        .flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| drift[(i, j)].norm())
        .fold(0.0, f64::max);
    assert!(off < 1e-15);
    assert!(linalg::hermiticity_error(&drift) < 1e-15);
}
