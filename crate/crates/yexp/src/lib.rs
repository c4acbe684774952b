//! Command-line front end for `yexp-core`: construction dumps, tables, and
//! verification sweeps with JSON and CSV reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! and domain errors.

pub mod args;
pub mod suite;

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use yexp_core::qsys::QTable;
use yexp_core::quiver::{build_dynkin_quiver, build_mutation_loop, Color, Sign};
use yexp_core::spectral::spectrum;
use yexp_core::tol::Tolerances;
use yexp_core::yseed::check_periodicity;
use yexp_core::ysys::{calibrate, eta_from_y, level2_y_solution, Calibration};
use yexp_core::{DynkinType, Family, RootSystem};

use args::{CaseArgs, Cli, Command, Common};
use suite::{CaseReport, Config};

/// Largest rank accepted on the command line.
pub const MAX_RANK: usize = 12;
pub const TOL_SCALE_VAR: &str = "YEXP_TOL_SCALE";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(yexp_core::Error),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(s) => write!(f, "{s}"),
        }
    }
}

impl From<yexp_core::Error> for CliError {
    fn from(e: yexp_core::Error) -> Self {
        CliError::Domain(e)
    }
}

type Outcome = Result<bool, CliError>;

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("yexp: {e}");
            2
        }
    }
}

fn config(c: &Common) -> Result<Config, CliError> {
    let mut tol = Tolerances {
        fixed_point: c.tol_fixed_point,
        periodicity: c.tol_periodicity,
        charpoly: c.tol_charpoly,
        fd_jacobian: c.tol_fd_jacobian,
        ..Tolerances::default()
    };
    if let Ok(v) = std::env::var(TOL_SCALE_VAR) {
        let s: f64 = v.trim().parse().map_err(|_| CliError::Usage(format!("{TOL_SCALE_VAR}={v} is not a number")))?;
        tol = tol.scaled(s);
    }
    if !tol.all_positive() {
        return Err(CliError::Usage("tolerances must be positive and finite".into()));
    }
    if c.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    Ok(Config { tol, samples: c.samples, seed: c.seed, csol_form: suite::csol_form(c.csol_form) })
}

fn case_type(family: Family, rank: usize) -> Result<DynkinType, CliError> {
    if rank > MAX_RANK {
        return Err(CliError::Usage(format!("rank {rank} is above the supported maximum {MAX_RANK}")));
    }
    Ok(DynkinType::new(family, rank)?)
}

fn open(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), CliError> {
    let f = open(path)?;
    serde_json::to_writer_pretty(f, value).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Rows go to `--csv PATH` when given, else to stdout.
fn write_csv(path: Option<&Path>, header: Option<&[&str]>, rows: &[Vec<String>]) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(open(p)?),
        None => Box::new(io::stdout()),
    };
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(sink);
    let io_err = |e: csv::Error| CliError::Io(e.to_string());
    if let Some(h) = header {
        w.write_record(h).map_err(io_err)?;
    }
    for r in rows {
        w.write_record(r).map_err(io_err)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn calibration(cfg: &Config) -> Result<Calibration, CliError> {
    Ok(calibrate(cfg.tol.qy_system)?)
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Quiver(a) => {
            config(&a.common)?;
            let lq = build_dynkin_quiver(case_type(a.family, a.rank)?, 2)?;
            print!("{}", lq.dump());
            Ok(true)
        }
        Command::Qtable(a) => qtable(&a),
        Command::Ytable(a) => ytable(&a),
        Command::Eta(a) => eta(&a),
        Command::Periodicity(a) => periodicity(&a),
        Command::Exponents(a) => exponents(&a),
        Command::Verify(a) => verify(&a),
        Command::ConjectureC(a) => conjecture_c(&a),
        Command::Sweep(a) => sweep(&a),
    }
}

fn table_rows(rows: Vec<(usize, usize, f64)>) -> Vec<Vec<String>> {
    rows.into_iter().map(|(i, m, v)| vec![i.to_string(), m.to_string(), format!("{v:.17e}")]).collect()
}

fn qtable(a: &CaseArgs) -> Outcome {
    config(&a.common)?;
    let rs = RootSystem::new(case_type(a.family, a.rank)?);
    let qt = QTable::build(&rs, 2)?;
    write_csv(a.common.csv.as_deref(), Some(&["i", "m", "Q"]), &table_rows(qt.rows()))?;
    Ok(true)
}

fn ytable(a: &CaseArgs) -> Outcome {
    let cfg = config(&a.common)?;
    let rs = RootSystem::new(case_type(a.family, a.rank)?);
    let ys = level2_y_solution(&rs, &calibration(&cfg)?)?;
    write_csv(a.common.csv.as_deref(), Some(&["i", "m", "Y"]), &table_rows(ys.rows()))?;
    Ok(true)
}

fn eta(a: &CaseArgs) -> Outcome {
    let cfg = config(&a.common)?;
    let ty = case_type(a.family, a.rank)?;
    let rs = RootSystem::new(ty);
    let ys = level2_y_solution(&rs, &calibration(&cfg)?)?;
    let lp = build_mutation_loop(ty)?;
    let eta = eta_from_y(&lp, &ys)?;
    let (res, _) = yexp_core::yseed::fixed_point_residual(&lp, &eta)?;
    let rows: Vec<Vec<String>> = lp
        .labeled
        .vertices
        .iter()
        .zip(&eta)
        .enumerate()
        .map(|(k, (v, e))| {
            let color = if v.color == Color::Black { "black" } else { "white" };
            let sign = if v.sign == Sign::Plus { "+" } else { "-" };
            vec![(k + 1).to_string(), color.into(), sign.into(), v.node.to_string(), v.m.to_string(), format!("{e:.17e}")]
        })
        .collect();
    write_csv(a.common.csv.as_deref(), Some(&["vertex", "color", "sign", "node", "m", "eta"]), &rows)?;
    eprintln!("fixed point residual {res:.2e}");
    Ok(res <= cfg.tol.fixed_point)
}

fn periodicity(a: &CaseArgs) -> Outcome {
    let cfg = config(&a.common)?;
    let ty = case_type(a.family, a.rank)?;
    let lp = build_mutation_loop(ty)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    for _ in 0..suite::PERIODICITY_POINTS {
        let y = suite::random_point(&mut rng, lp.n_vertices());
        worst = worst.max(check_periodicity(&lp, &y, ty.period(2))?);
    }
    let pass = worst <= cfg.tol.periodicity;
    println!(
        "{ty} P={} points={} seed={} residual={worst:.2e} {}",
        ty.period(2),
        suite::PERIODICITY_POINTS,
        cfg.seed,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(pass)
}

fn exponents(a: &CaseArgs) -> Outcome {
    let cfg = config(&a.common)?;
    let ty = case_type(a.family, a.rank)?;
    let rs = RootSystem::new(ty);
    let ys = level2_y_solution(&rs, &calibration(&cfg)?)?;
    let lp = build_mutation_loop(ty)?;
    let eta = eta_from_y(&lp, &ys)?;
    let sp = spectrum(&lp, &eta, 2)?;
    let mut row = vec![ty.family.to_string(), ty.rank.to_string(), sp.exponents.period.to_string()];
    row.extend(sp.exponents.exponents.iter().map(|m| m.to_string()));
    write_csv(a.common.csv.as_deref(), None, &[row])?;
    Ok(sp.snap_error <= cfg.tol.root_snap && sp.exponents.conjugation_symmetric())
}

fn verify(a: &CaseArgs) -> Outcome {
    let cfg = config(&a.common)?;
    let ty = case_type(a.family, a.rank)?;
    let rep = suite::verify_case(ty, &calibration(&cfg)?, &cfg);
    print!("{}", rep.text());
    if let Some(p) = &a.common.json {
        write_json(p, &rep)?;
    }
    if let Some(p) = &a.common.csv {
        write_csv(Some(p), None, &[exponent_row(&rep)])?;
    }
    Ok(rep.passed())
}

fn exponent_row(r: &CaseReport) -> Vec<String> {
    let mut row = vec![r.family.clone(), r.rank.to_string(), r.period.to_string()];
    row.extend(r.exponents.iter().map(|m| m.to_string()));
    row
}

fn conjecture_c(a: &args::CsolArgs) -> Outcome {
    let cfg = config(&a.common)?;
    let hi = a.rank_max.unwrap_or(a.rank);
    if hi < a.rank {
        return Err(CliError::Usage(format!("--rank-max {hi} is below --rank {}", a.rank)));
    }
    case_type(Family::C, hi)?;
    case_type(Family::C, a.rank)?;
    let cal = calibration(&cfg)?;
    println!("numerical evidence only: the cosine-product identity is conjectural");
    let mut reports = Vec::new();
    for n in a.rank..=hi {
        let r = suite::csol_case(n, &cal, &cfg)?;
        println!(
            "C{n} form={} samples={} csol={:.2e} {} reduction={:.2e} {}",
            r.form,
            r.samples,
            r.csol.residual,
            if r.csol.pass { "PASS" } else { "FAIL" },
            r.c_reduction.residual,
            if r.c_reduction.pass { "PASS" } else { "FAIL" },
        );
        reports.push(r);
    }
    if let Some(p) = &a.common.json {
        write_json(p, &reports)?;
    }
    Ok(reports.iter().all(|r| r.csol.pass && r.c_reduction.pass))
}

fn sweep(a: &args::SweepArgs) -> Outcome {
    let cfg = config(&a.common)?;
    if a.rank_max > MAX_RANK {
        return Err(CliError::Usage(format!("--rank-max {} is above {MAX_RANK}", a.rank_max)));
    }
    let families: Vec<Family> = a.family.map_or(Family::ALL.to_vec(), |f| vec![f]);
    let cases: Vec<DynkinType> = families
        .iter()
        .flat_map(|&f| (a.rank.max(f.min_rank())..=a.rank_max).map(move |n| DynkinType::new(f, n)))
        .collect::<yexp_core::Result<_>>()?;
    if cases.is_empty() {
        return Err(CliError::Usage("empty rank range".into()));
    }
    let cal = calibration(&cfg)?;
    let reports = run_parallel(&cases, &cal, &cfg);
    for r in &reports {
        let failed: Vec<&str> = r.checks.iter().filter(|(_, c)| !c.pass).map(|(n, _)| n.as_str()).collect();
        println!(
            "{}{:<3} {}{}",
            r.family,
            r.rank,
            if r.passed() { "PASS" } else { "FAIL" },
            if failed.is_empty() { String::new() } else { format!(" ({})", failed.join(", ")) }
        );
    }
    if let Some(p) = &a.common.json {
        write_json(p, &reports)?;
    }
    if let Some(p) = &a.common.csv {
        write_csv(Some(p), None, &reports.iter().map(exponent_row).collect::<Vec<_>>())?;
    }
    Ok(reports.iter().all(CaseReport::passed))
}

/// Cases are handed out to worker threads and the reports sorted by case key.
fn run_parallel(cases: &[DynkinType], cal: &Calibration, cfg: &Config) -> Vec<CaseReport> {
    let next = AtomicUsize::new(0);
    let out = Mutex::new(Vec::with_capacity(cases.len()));
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cases.len());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&ty) = cases.get(k) else { break };
                let rep = suite::verify_case(ty, cal, cfg);
                out.lock().expect("report lock").push(rep);
            });
        }
    });
    let mut v = out.into_inner().expect("report lock");
    v.sort_by_key(CaseReport::key);
    v
}
