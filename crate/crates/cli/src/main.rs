//! `coolctl`: command-line front end for coolcore.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 system not coolable,
//! 3 a verification found a violation.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use coolcore::config::{Builtin, SystemConfig};
use coolcore::coolability::is_coolable;
use coolcore::majorization::SchurCost;
use coolcore::qubit;
use coolcore::systems::{
    j_polytope_bound, make_spin_spin, planted_self_test, spin_spin_final_state, spin_spin_schedule,
    v_final_state, v_schedule, verify_conjecture, CoolingSchedule,
};
use coolcore::{LindbladSystem, SimplexPoint};

const EXIT_USAGE: u8 = 1;
const EXIT_NOT_COOLABLE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

/// Schedules whose RK4 check misses the closed form by more than this fail.
const SCHEDULE_RESIDUAL_TOL: f64 = 1e-8;
const J_BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "coolctl", version, about = "Time-optimal cooling of Markovian quantum systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a system can be cooled to a pure state.
    Coolable(CoolableArgs),
    /// Tabulate the optimal qubit speed μ(λ) as CSV (lambda, mu, branch).
    MuCurve(MuCurveArgs),
    /// Tabulate the optimal qubit path and control as CSV (t, lambda, y, u_y).
    QubitOptimal(QubitOptimalArgs),
    /// Optimal permutation schedule for the V-system (--eps) or spin-spin system (--budget).
    Schedule(ScheduleArgs),
    /// Sample the derivative facet conjecture and the J-matrix polytope bound.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct CoolableArgs {
    /// System definition (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Also write the verdict JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MuCurveArgs {
    #[arg(long, default_value_t = 0.5)]
    nu: f64,
    /// Number of λ intervals; the CSV has grid + 1 rows.
    #[arg(long, default_value_t = 100)]
    grid: usize,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QubitOptimalArgs {
    #[arg(long, default_value_t = 0.5)]
    nu: f64,
    #[arg(long = "t-end", default_value_t = 6.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-2)]
    dt: f64,
    /// CSV destination; the summary JSON goes next to it with extension `.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScheduleArgs {
    /// Builtin vsys or spinspin system (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Initial spectrum, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    lam0: Vec<f64>,
    /// Target population b + c outside the ground state (V-system).
    #[arg(long)]
    eps: Option<f64>,
    /// Total time (spin-spin system).
    #[arg(long)]
    budget: Option<f64>,
    /// Cost optimized by the spin-spin schedule.
    #[arg(long, default_value = "purity")]
    cost: String,
    /// RK4 step of the verification trajectory.
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Schedule JSON destination; the trajectory goes to `<stem>.trajectory.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// System for the J-matrix bound; the facet conjecture runs for spin-spin only.
    /// Defaults to the spin-spin system.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, env = "COOLCTL_SEED", default_value_t = 1)]
    seed: u64,
    /// Random regular spectra for the facet check.
    #[arg(long = "lam-count", default_value_t = 100)]
    lam_count: usize,
    /// Haar samples per spectrum (and for the J bound).
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Run the planted Λ-system point through the checker; a working checker exits 3.
    #[arg(long = "self-test")]
    self_test: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Coolable(a) => cmd_coolable(a),
        Command::MuCurve(a) => cmd_mu_curve(a).map(|_| 0),
        Command::QubitOptimal(a) => cmd_qubit_optimal(a).map(|_| 0),
        Command::Schedule(a) => cmd_schedule(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

/// Writes `bytes` via a temporary file in the target directory and a rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, bytes),
        None => Ok(std::io::stdout().write_all(bytes)?),
    }
}

fn json_bytes(value: &Value) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Prints `value` and, if requested, writes it to `out` as well.
fn report(value: &Value, out: Option<&Path>) -> Result<()> {
    let bytes = json_bytes(value)?;
    std::io::stdout().write_all(&bytes)?;
    if let Some(path) = out {
        write_atomic(path, &bytes)?;
    }
    Ok(())
}

/// Round-trip exact formatting (17 significant digits).
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(w.into_inner()?)
}

fn load_system(path: &Path) -> Result<(SystemConfig, LindbladSystem)> {
    let cfg = SystemConfig::from_path(path)?;
    let sys = cfg
        .build()
        .with_context(|| format!("invalid system in {}", path.display()))?;
    Ok((cfg, sys))
}

fn cmd_coolable(args: CoolableArgs) -> Result<u8> {
    let (cfg, sys) = load_system(&args.config)?;
    let verdict = is_coolable(&sys);
    let witness = verdict.witness.as_ref().map(|w| {
        w.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()
    });
    let value = json!({
        "name": cfg.name,
        "dimension": sys.dim(),
        "coolable": verdict.coolable,
        "witness": witness,
        "common_eigenvectors": verdict.diagnostics.rays.len(),
        "common_continua": verdict.diagnostics.continua.iter().map(|c| c.basis.ncols()).collect::<Vec<_>>(),
    });
    report(&value, args.out.as_deref())?;
    Ok(if verdict.coolable { 0 } else { EXIT_NOT_COOLABLE })
}

fn check_nu(nu: f64) -> Result<()> {
    if !(0.0..1.0).contains(&nu) {
        bail!("--nu must lie in [0, 1), got {nu}");
    }
    Ok(())
}

fn cmd_mu_curve(args: MuCurveArgs) -> Result<()> {
    check_nu(args.nu)?;
    if args.grid == 0 {
        bail!("--grid must be positive");
    }
    let rows = (0..=args.grid).map(|k| {
        let lam = k as f64 / args.grid as f64;
        vec![
            num(lam),
            num(qubit::mu(args.nu, lam)),
            qubit::mu_branch(args.nu, lam).to_string(),
        ]
    });
    emit(args.out.as_deref(), &csv_bytes(&["lambda", "mu", "branch"], rows)?)
}

fn cmd_qubit_optimal(args: QubitOptimalArgs) -> Result<()> {
    check_nu(args.nu)?;
    if !(args.dt > 0.0) || !(args.t_end >= 0.0) || !args.t_end.is_finite() {
        bail!("need --dt > 0 and a finite --t-end ≥ 0");
    }
    let nu = args.nu;
    let switch = qubit::t0(nu);
    let steps = (args.t_end / args.dt).round() as usize;
    let rows: Vec<Vec<String>> = (0..=steps)
        .map(|k| {
            let t = k as f64 * args.dt;
            let (lam, y) = qubit::opt_path(nu, t);
            // The control is singular at the switch time; leave that sample blank.
            let u = if (t - switch).abs() < 0.5 * args.dt {
                String::new()
            } else {
                num(qubit::u_y_control(nu, t))
            };
            vec![num(t), num(lam), num(y), u]
        })
        .collect();
    let summary = json!({
        "nu": nu,
        "t0": if switch.is_finite() { Some(switch) } else { None },
        "c": qubit::c_const(nu),
        "lambda0": qubit::lambda0(nu),
        "y_star_limit": qubit::y_star_limit(nu),
        "rows": rows.len(),
    });
    let csv = csv_bytes(&["t", "lambda", "y", "u_y"], rows)?;
    match &args.out {
        Some(path) => {
            write_atomic(path, &csv)?;
            let summary_path = path.with_extension("json");
            write_atomic(&summary_path, &json_bytes(&summary)?)?;
            report(&summary, None)
        }
        None => {
            std::io::stdout().write_all(&csv)?;
            Ok(())
        }
    }
}

fn cmd_schedule(args: ScheduleArgs) -> Result<u8> {
    let (cfg, sys) = load_system(&args.config)?;
    let lam0 = SimplexPoint::new(args.lam0.clone()).context("invalid --lam0")?;
    if !(args.dt > 0.0) {
        bail!("--dt must be positive");
    }
    let (kind, schedule, closed): (&str, CoolingSchedule, SimplexPoint) = match cfg.builtin {
        Some(Builtin::Vsys { gamma1, gamma2 }) => {
            let Some(eps) = args.eps else {
                bail!("the V-system schedule needs --eps");
            };
            let s = v_schedule(gamma1, gamma2, &lam0, eps)?;
            let d = s.durations();
            let fin = v_final_state(gamma1, gamma2, &lam0, d[0], d[1])?;
            ("vsys", s, fin)
        }
        Some(Builtin::Spinspin) => {
            let Some(budget) = args.budget else {
                bail!("the spin-spin schedule needs --budget");
            };
            let cost: SchurCost = args.cost.parse()?;
            let s = spin_spin_schedule(&lam0, cost, budget)?;
            let d = s.durations();
            let fin = spin_spin_final_state(&lam0, d[0], d[1])?;
            ("spinspin", s, fin)
        }
        _ => bail!("schedule needs a builtin vsys or spinspin config"),
    };

    // The closed forms work on the sorted spectrum.
    let start = lam0.sorted_desc();
    let traj = schedule.integrate(&sys, &start, args.dt)?;
    let end = &traj.last().expect("trajectory has a start point").1;
    let residual = end
        .as_slice()
        .iter()
        .zip(closed.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let target_residual = args.eps.filter(|_| kind == "vsys").map(|eps| {
        let s = closed.as_slice();
        (s[1] + s[2] - eps).abs()
    });

    let mut value = json!({
        "system": kind,
        "lam0": start.as_slice(),
        "schedule": schedule,
        "final_state": closed.as_slice(),
        "rk4_final_state": end.as_slice(),
        "residual": residual,
        "dt": args.dt,
    });
    if let Some(r) = target_residual {
        value["target_residual"] = json!(r);
    }
    if kind == "spinspin" {
        value["cost"] = json!(args.cost);
    }
    report(&value, args.out.as_deref())?;

    if let Some(path) = &args.out {
        let n = start.dim();
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|k| format!("lambda_{k}")));
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = traj.iter().map(|(t, lam)| {
            std::iter::once(num(*t))
                .chain(lam.as_slice().iter().map(|x| num(*x)))
                .collect()
        });
        write_atomic(&trajectory_path(path), &csv_bytes(&header, rows)?)?;
    }
    let worst = residual.max(target_residual.unwrap_or(0.0));
    Ok(if worst <= SCHEDULE_RESIDUAL_TOL { 0 } else { EXIT_VIOLATION })
}

fn trajectory_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.trajectory.csv"))
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let (name, sys, facets) = match &args.config {
        Some(path) => {
            let (cfg, sys) = load_system(path)?;
            let spin = matches!(cfg.builtin, Some(Builtin::Spinspin));
            (cfg.name.unwrap_or_else(|| path.display().to_string()), sys, spin)
        }
        None => ("spinspin".to_string(), make_spin_spin(), true),
    };

    let bound = j_polytope_bound(&sys);
    let j_violation = (args.samples > 0).then(|| bound.sampled_violation(&sys, args.samples, args.seed));
    let j_ok = j_violation.is_none_or(|v| v <= J_BOUND_TOL);

    let conjecture = if facets {
        Some(verify_conjecture(args.lam_count, args.samples, args.seed)?)
    } else {
        None
    };
    let conjecture_ok = conjecture.as_ref().is_none_or(|r| r.consistent);

    let self_test = if args.self_test { Some(planted_self_test()?) } else { None };
    let flagged = self_test.as_ref().is_some_and(|s| s.flagged);

    let value = json!({
        "system": name,
        "seed": args.seed,
        "j_bound": {
            "halfspaces": bound.halfspaces.len(),
            "samples": args.samples,
            "tolerance": J_BOUND_TOL,
            "max_violation": j_violation,
            "consistent": j_ok,
        },
        "conjecture": conjecture,
        "self_test": self_test,
    });
    report(&value, args.out.as_deref())?;
    Ok(if j_ok && conjecture_ok && !flagged { 0 } else { EXIT_VIOLATION })
}
