use coolcore::config::{Builtin, SystemConfig};
use coolcore::coolability::is_coolable;
use coolcore::evolution::integrate_full;
use coolcore::linalg::{self, c, real, CMatrix};
use coolcore::majorization::{majorizes, SchurCost};
use coolcore::quantum::{spectrum_desc, DensityMatrix, LindbladSystem};
use coolcore::qubit::{general_schedule, normal_form, opt_path};
use coolcore::reduced::{integrate_reduced, lift_control, lifted_initial_state, UnitarySchedule};
use coolcore::simplex::SimplexPoint;
use coolcore::systems::{
    make_spin_spin, make_v_system, spin_spin_final_state, spin_spin_schedule, v_final_state,
    v_schedule,
};

#[test]
fn builtin_config_round_trip() {
    let cfg = SystemConfig::builtin("v", Builtin::Vsys { gamma1: 1.0, gamma2: 2.0 });
    let text = serde_json::to_string(&cfg).unwrap();
    let back = SystemConfig::from_json_str(&text).unwrap();
    assert_eq!(back, cfg);
    assert_eq!(back.build().unwrap().dim(), 3);
}

#[test]
fn explicit_config_round_trip() {
    let v = CMatrix::from_row_slice(2, 2, &[c(0.1, 0.2), real(1.0), real(0.0), c(-0.3, 0.0)]);
    let cfg = SystemConfig::explicit("q", None, std::slice::from_ref(&v));
    let sys = SystemConfig::from_json_str(&serde_json::to_string(&cfg).unwrap())
        .unwrap()
        .build()
        .unwrap();
    assert!(linalg::max_abs(&(&sys.terms()[0] - &v)) < 1e-15);
}

#[test]
fn config_rejects_mixed_forms() {
    let text = r#"{"builtin": {"kind": "spinspin"}, "lindblad_terms": [[[[0,0]]]]}"#;
    assert!(SystemConfig::from_json_str(text).is_err());
    assert!(SystemConfig::from_json_str("{}").is_err());
    assert!(SystemConfig::from_json_str(r#"{"builtin": {"kind": "nope"}}"#).is_err());
}

#[test]
fn v_schedule_reaches_target_in_reduced_dynamics() {
    let sys = make_v_system(1.0, 2.0).unwrap();
    let lam0 = SimplexPoint::new(vec![0.5, 0.3, 0.2]).unwrap();
    let sched = v_schedule(1.0, 2.0, &lam0, 0.1).unwrap();
    let traj = sched.integrate(&sys, &lam0, 1e-4).unwrap();
    let end = traj.last().unwrap().1.as_slice();
    assert!((end[1] + end[2] - 0.1).abs() < 1e-6, "{end:?}");
    let closed = v_final_state(1.0, 2.0, &lam0, sched.segments[0].duration, sched.segments[1].duration).unwrap();
    for (a, b) in end.iter().zip(closed.as_slice()) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn spin_spin_schedule_cools_monotonically() {
    let lam0 = SimplexPoint::new(vec![0.3, 0.28, 0.22, 0.2]).unwrap();
    let sched = spin_spin_schedule(&lam0, SchurCost::Purity, 3.0).unwrap();
    assert!((sched.total_time - 3.0).abs() < 1e-9);
    let sys = make_spin_spin();
    let traj = sched.integrate(&sys, &lam0, 1e-3).unwrap();
    for w in traj.windows(2) {
        assert!(majorizes(&w[1].1, &w[0].1).unwrap());
    }
    let end = spin_spin_final_state(&lam0, sched.segments[0].duration, sched.segments[1].duration).unwrap();
    assert!(SchurCost::Purity.eval(&end) > SchurCost::Purity.eval(&lam0));
}

#[test]
fn lifted_permutation_schedule_tracks_reduced_spectrum() {
    let sys = make_v_system(1.0, 2.0).unwrap();
    let lam0 = SimplexPoint::new(vec![0.5, 0.3, 0.2]).unwrap();
    let ctrl = UnitarySchedule::piecewise(&[
        (linalg::permutation_matrix(&[0, 2, 1]), 0.5),
        (linalg::identity(3), 0.5),
    ])
    .unwrap();
    let reduced = integrate_reduced(&sys, &lam0, &ctrl, 1.0, 1e-3).unwrap();
    let full_ctrl = lift_control(&sys, &reduced, &ctrl).unwrap();
    let rho0 = lifted_initial_state(&lam0, &ctrl);
    let full = integrate_full(&sys, &rho0, &full_ctrl, 1.0, 1e-3).unwrap();
    let (_, last) = full.last().unwrap();
    let expected = reduced.last().unwrap().1.sorted_desc();
    for (a, b) in spectrum_desc(last).as_slice().iter().zip(expected.as_slice()) {
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn general_qubit_schedule_tracks_optimal_path() {
    let v = CMatrix::from_row_slice(2, 2, &[c(0.3, -0.1), c(0.9, 0.2), c(0.1, 0.05), c(-0.2, 0.4)]);
    let nf = normal_form(&v).unwrap();
    let sched = general_schedule(&v).unwrap();
    let sys = LindbladSystem::dissipative(vec![v]).unwrap();
    let traj = integrate_full(&sys, &sched.initial_state, &sched.control, 2.0, 1e-3).unwrap();
    for (t, rho) in traj.iter().step_by(100) {
        let lam = opt_path(nf.nu, nf.gamma * t).0;
        let top = spectrum_desc(rho).as_slice()[0];
        assert!((top - lam.max(1.0 - lam)).abs() < 1e-3, "t={t}: {top} vs {lam}");
    }
}

#[test]
fn verdicts_for_builtins_and_controls() {
    assert!(is_coolable(&make_spin_spin()).coolable);
    let dephasing = LindbladSystem::dissipative(vec![linalg::pauli_z()]).unwrap();
    let verdict = is_coolable(&dephasing);
    assert!(!verdict.coolable);
    let amp = LindbladSystem::dissipative(vec![linalg::sigma_minus()]).unwrap();
    let verdict = is_coolable(&amp);
    assert!(verdict.coolable);
    let w = verdict.witness.unwrap();
    assert!(w[0].norm() > 1.0 - 1e-9);
    assert!(DensityMatrix::new(linalg::identity(2) * real(0.5)).is_ok());
}
