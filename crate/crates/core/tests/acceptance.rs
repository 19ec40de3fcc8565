//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use coolcore::coolability::is_coolable;
use coolcore::evolution::{integrate_full, ControlSchedule};
use coolcore::haar;
use coolcore::hull::convex_hull;
use coolcore::linalg::{self, c, real, CMatrix};
use coolcore::majorization::optimal_vertices;
use coolcore::quantum::{spectrum_desc, DensityMatrix, LindbladSystem};
use coolcore::qubit::{general_schedule, mu, opt_path, q_point, v_tilde};
use coolcore::reduced::{derivative, j_matrix_unchecked};
use coolcore::simplex::SimplexPoint;
use coolcore::systems::{
    j_polytope_bound, lambda_counterexample, make_lambda_system, make_spin_spin,
    make_v_system, permutation_vertices, planted_self_test, random_regular_point,
    v_clamp_threshold, v_final_state, v_schedule, verify_conjecture,
};
use rand_distr::{Distribution, StandardNormal};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn qubit_ode_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for nu in [0.0, 0.25, 0.5, 0.75] {
        let dt: f64 = 1e-4;
        let mut lam = 0.0;
        let mut t = 0.0;
        for target in [0.5, 1.0, 2.0, 4.0] {
            while t < target - 1e-12 {
                let h = dt.min(target - t);
                let k1 = mu(nu, lam);
                let k2 = mu(nu, lam + 0.5 * h * k1);
                let k3 = mu(nu, lam + 0.5 * h * k2);
                let k4 = mu(nu, lam + h * k3);
                lam += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                t += h;
            }
            worst = worst.max((lam - opt_path(nu, target).0).abs());
        }
    }
    check(worst <= 1e-6, format!("max |λ_rk4 − λ*| = {worst:.2e}"))
}

/// Golden-section maximum of `f` on [lo, hi] after a dense scan.
fn maximize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let n: usize = 400;
    let step = (hi - lo) / n as f64;
    let k = (0..=n)
        .max_by(|&a, &b| f(lo + a as f64 * step).total_cmp(&f(lo + b as f64 * step)))
        .unwrap();
    let (mut a, mut b) = (lo + k.saturating_sub(1) as f64 * step, lo + (k + 1).min(n) as f64 * step);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    while b - a > 1e-12 {
        let (x1, x2) = (b - r * (b - a), a + r * (b - a));
        if f(x1) >= f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    f(0.5 * (a + b)).max(f(lo)).max(f(hi))
}

fn envelope() -> Outcome {
    let nu = 0.5;
    let sys = LindbladSystem::dissipative(vec![v_tilde(nu)]).unwrap();
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_gap: f64 = 0.0;
    for k in 0..=100 {
        let lam = k as f64 / 100.0;
        let point = SimplexPoint::new(vec![lam, 1.0 - lam]).unwrap();
        let best = haar::map_haar(2, 20_000, 1000 + k as u64, |u| derivative(&sys, u, &point)[0])
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        worst_excess = worst_excess.max(best - mu(nu, lam));
        // Boundary parabolas are the latitudes z = 0 and z = ¼.
        let boundary = [0.0, 0.25]
            .into_iter()
            .map(|z| maximize(|x| q_point(nu, x, z).unwrap().derivative(lam), 0.0, 1.0))
            .fold(f64::NEG_INFINITY, f64::max);
        worst_gap = worst_gap.max(mu(nu, lam) - boundary);
    }
    check(
        worst_excess <= 1e-9 && worst_gap <= 1e-6,
        format!("max sampled − μ = {worst_excess:.2e}, max μ − boundary max = {worst_gap:.2e}"),
    )
}

fn full_lift() -> Outcome {
    let nu = 0.5;
    let sched = general_schedule(&v_tilde(nu)).map_err(|e| e.to_string())?;
    let sys = LindbladSystem::dissipative(vec![v_tilde(nu)]).unwrap();
    let traj = integrate_full(&sys, &sched.initial_state, &sched.control, 6.0, 1e-4)
        .map_err(|e| e.to_string())?;
    let worst = traj
        .iter()
        .map(|(t, rho)| {
            let lam = opt_path(nu, *t).0;
            let spec = spectrum_desc(rho);
            (spec[0] - lam.max(1.0 - lam)).abs()
        })
        .fold(0.0, f64::max);
    check(
        worst <= 1e-3,
        format!("{} grid points, max |spec(ρ) − (λ*, 1 − λ*)| = {worst:.2e}", traj.len()),
    )
}

fn coolability_table() -> Outcome {
    let sys = |terms: Vec<CMatrix>| LindbladSystem::dissipative(terms).unwrap();
    let table = [
        ("Ṽ(ν=0.5)", sys(vec![v_tilde(0.5)]), true),
        ("σ_x", sys(vec![linalg::pauli_x()]), false),
        ("σ_z", sys(vec![linalg::pauli_z()]), false),
        ("Λ(1,2)", make_lambda_system(1.0, 2.0).unwrap(), true),
        ("V(1,2)", make_v_system(1.0, 2.0).unwrap(), true),
        ("spin-spin", make_spin_spin(), true),
    ];
    let wrong: Vec<&str> = table
        .iter()
        .filter(|(_, s, expected)| is_coolable(s).coolable != *expected)
        .map(|(name, _, _)| *name)
        .collect();

    let mut rng = haar::sample_rng(2024, 0);
    let mut mismatches = 0;
    let mut normal_count = 0;
    for k in 0..1000 {
        let v = if k % 2 == 0 {
            CMatrix::from_fn(2, 2, |_, _| c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
        } else {
            let u = haar::haar_unitary_from(2, &mut rng);
            let d = CMatrix::from_fn(2, 2, |i, j| {
                if i == j {
                    c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
                } else {
                    real(0.0)
                }
            });
            &u * d * u.adjoint()
        };
        let normal = linalg::commutator(&v, &v.adjoint()).norm() <= 1e-10;
        normal_count += normal as usize;
        if is_coolable(&sys(vec![v])).coolable == normal {
            mismatches += 1;
        }
    }
    check(
        wrong.is_empty() && mismatches == 0,
        format!(
            "table mismatches {wrong:?}; random qubits: {mismatches} mismatches over 1000 ({normal_count} normal)"
        ),
    )
}

fn v_polytope() -> Outcome {
    let sys = make_v_system(1.0, 2.0).unwrap();
    let lam = SimplexPoint::new(vec![0.4, 0.35, 0.25]).unwrap();
    let verts: Vec<Vec<f64>> = permutation_vertices(&sys, &lam).unwrap().into_iter().map(|v| v.0).collect();
    let hull = convex_hull(&verts).map_err(|e| e.to_string())?;
    let worst = haar::map_haar(3, 10_000, 5, |u| hull.violation(derivative(&sys, u, &lam).as_slice()))
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    check(
        hull.vertices().len() == 6 && worst <= 1e-9,
        format!("{} hull vertices, max violation = {worst:.2e}", hull.vertices().len()),
    )
}

fn lambda_example() -> Outcome {
    let (d, dist) = lambda_counterexample(0.5).map_err(|e| e.to_string())?;
    check(
        close(d.as_slice(), &[-0.75, 0.25, 0.5], 1e-12) && dist > 0.1,
        format!("derivative {:?}, distance {dist:.4}", d.as_slice()),
    )
}

fn spin_spin_j_bounds() -> Outcome {
    let sys = make_spin_spin();
    let stats = haar::map_haar(4, 10_000, 7, |u| {
        let j = j_matrix_unchecked(&sys, u);
        let m = j.matrix();
        let min = m.iter().copied().fold(f64::INFINITY, f64::min);
        let sums = j
            .row_sums()
            .iter()
            .zip(j.col_sums())
            .map(|(r, c)| (r + c - 1.0).abs())
            .fold(0.0, f64::max);
        let diag = (0..4).map(|i| m[(i, i)]).fold(f64::NEG_INFINITY, f64::max);
        (min, sums, diag)
    });
    let min = stats.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let sums = stats.iter().map(|s| s.1).fold(0.0, f64::max);
    let diag = stats.iter().map(|s| s.2).fold(f64::NEG_INFINITY, f64::max);
    check(
        min >= -1e-12 && sums <= 1e-9 && diag <= 0.25 + 1e-12,
        format!("min J = {min:.2e}, max |(J+Jᵀ)𝟙 − 𝟙| = {sums:.2e}, max J_ii = {diag:.6}"),
    )
}

fn conjecture() -> Outcome {
    let report = verify_conjecture(100, 1000, 1).map_err(|e| e.to_string())?;
    let planted = planted_self_test().map_err(|e| e.to_string())?;
    let max = report.max_facet_violation.unwrap_or(f64::NEG_INFINITY);
    check(
        max <= 1e-9 && planted.flagged,
        format!(
            "{} samples, max facet violation = {max:.2e}; planted violation = {:.3} (flagged: {})",
            report.samples, planted.violation, planted.flagged
        ),
    )
}

fn same_set(mut a: Vec<Vec<f64>>, mut b: Vec<Vec<f64>>) -> bool {
    let key = |x: &Vec<f64>, y: &Vec<f64>| x.partial_cmp(y).unwrap();
    a.sort_by(key);
    b.sort_by(key);
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| close(x, y, 1e-9))
}

fn optimal_filter() -> Outcome {
    let v = make_v_system(1.0, 2.0).unwrap();
    let spin = make_spin_spin();
    let mut rng = haar::sample_rng(9, 0);
    let mut failures = Vec::new();
    for k in 0..100 {
        let lam = random_regular_point(&mut rng, 3).sorted_desc();
        let (b, cc) = (lam[1], lam[2]);
        let expected = vec![vec![2.0 * b + cc, -2.0 * b, -cc], vec![b + 2.0 * cc, -b, -2.0 * cc]];
        let verts: Vec<Vec<f64>> = permutation_vertices(&v, &lam).unwrap().into_iter().map(|x| x.0).collect();
        if !same_set(optimal_vertices(&convex_hull(&verts).unwrap()), expected) {
            failures.push(format!("V #{k}"));
        }

        let lam = random_regular_point(&mut rng, 4).sorted_desc();
        let (b, cc, d) = (lam[1], lam[2], lam[3]);
        let expected = vec![vec![b, -b, d, -d], vec![cc, d, -cc, -d]];
        let verts: Vec<Vec<f64>> = permutation_vertices(&spin, &lam).unwrap().into_iter().map(|x| x.0).collect();
        if !same_set(optimal_vertices(&convex_hull(&verts).unwrap()), expected) {
            failures.push(format!("spin-spin #{k}"));
        }
    }
    check(failures.is_empty(), format!("200 polytopes, failures: {failures:?}"))
}

fn v_schedule_optimality() -> Outcome {
    let (g1, g2) = (1.0, 2.0);
    let lam0 = SimplexPoint::new(vec![0.5, 0.3, 0.2]).unwrap();
    let threshold = v_clamp_threshold(g1, g2, 0.3, 0.2);
    let n = 1000;
    let h = 10.0 / (n - 1) as f64;
    let mut notes = Vec::new();
    let mut ok = true;
    for eps in [0.1, 0.4] {
        let s = v_schedule(g1, g2, &lam0, eps).map_err(|e| e.to_string())?;
        let (t1, t2) = (s.segments[0].duration, s.segments[1].duration);
        let fin = v_final_state(g1, g2, &lam0, t1, t2).map_err(|e| e.to_string())?;
        let residual = (fin[1] + fin[2] - eps).abs();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (i as f64 * h, j as f64 * h);
                let eb = (-(g2 * a + g1 * b)).exp() * 0.3;
                let ec = (-(g1 * a + g2 * b)).exp() * 0.2;
                if eb + ec <= eps {
                    best = best.min(a + b);
                }
            }
        }
        let total = s.total_time;
        let clamped = t2 == 0.0;
        ok &= residual <= 1e-9 && total <= best + 2.0 * h && best >= total - 1e-9;
        ok &= clamped == (eps > threshold);
        notes.push(format!(
            "ε={eps}: T={total:.6} grid best={best:.6} residual={residual:.1e} clamped={clamped}"
        ));
    }
    // Clamp switch over a sweep of targets.
    let mut switch_errors = 0;
    for k in 1..500 {
        let eps = 0.5 * k as f64 / 500.0;
        if (eps - threshold).abs() < 1e-6 {
            continue;
        }
        let s = v_schedule(g1, g2, &lam0, eps).map_err(|e| e.to_string())?;
        if (s.segments[1].duration == 0.0) != (eps > threshold) {
            switch_errors += 1;
        }
    }
    ok &= switch_errors == 0;
    notes.push(format!("threshold {threshold:.4}, clamp mismatches {switch_errors}/499"));
    check(ok, notes.join("; "))
}

fn majorization_bounds() -> Outcome {
    let systems = [
        ("Λ", make_lambda_system(1.0, 2.0).unwrap()),
        ("V", make_v_system(1.0, 2.0).unwrap()),
        ("spin-spin", make_spin_spin()),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (k, (name, sys)) in systems.iter().enumerate() {
        let bound = j_polytope_bound(sys);
        let worst = bound.sampled_violation(sys, 10_000, 11 + k as u64);
        ok &= worst <= 1e-9;
        notes.push(format!("{name}: {} halfspaces, max violation {worst:.2e}", bound.halfspaces.len()));
    }
    check(ok, notes.join("; "))
}

fn integrator_order() -> Outcome {
    let sys = LindbladSystem::dissipative(vec![linalg::sigma_minus()]).unwrap();
    let plus = CMatrix::from_element(2, 2, real(0.5));
    let rho0 = DensityMatrix::new(plus).unwrap();
    let exact = |t: f64| {
        let e = (-t).exp();
        let coh = real(0.5 * (-0.5 * t).exp());
        CMatrix::from_row_slice(2, 2, &[real(1.0 - 0.5 * e), coh, coh, real(0.5 * e)])
    };
    let error = |dt: f64| {
        let traj = integrate_full(&sys, &rho0, &ControlSchedule::zero(2), 1.0, dt).unwrap();
        traj.iter()
            .map(|(t, rho)| linalg::max_abs(&(rho.matrix() - exact(*t))))
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (error(1e-2), error(5e-3));
    let ratio = coarse / fine;
    check(ratio >= 8.0, format!("errors {coarse:.2e} → {fine:.2e}, ratio {ratio:.1}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 12] = [
        ("qubit closed form vs ODE oracle", qubit_ode_oracle, Duration::from_secs(1)),
        ("qubit envelope optimality", envelope, Duration::from_secs(30)),
        ("full-system lift of the qubit control", full_lift, Duration::from_secs(30)),
        ("coolability verdicts", coolability_table, Duration::from_secs(5)),
        ("V-system derivative polytope", v_polytope, Duration::from_secs(10)),
        ("Λ-system counterexample", lambda_example, Duration::from_secs(1)),
        ("spin-spin J bounds", spin_spin_j_bounds, Duration::from_secs(10)),
        ("spin-spin conjecture harness", conjecture, Duration::from_secs(60)),
        ("optimal-vertex filter", optimal_filter, Duration::from_secs(10)),
        ("V-system schedule optimality", v_schedule_optimality, Duration::from_secs(60)),
        ("majorization-bound polytope", majorization_bounds, Duration::from_secs(30)),
        ("integrator order", integrator_order, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) => (elapsed <= *budget, d),
            Err(d) => (false, d),
        };
        let over = if elapsed > *budget { " [over time budget]" } else { "" };
        println!(
            "{} {:>2} {name}: {detail} ({:.2}s of {}s){over}",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        failed += (!ok) as usize;
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
