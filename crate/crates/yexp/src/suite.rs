//! The per-case check suite. Every check runs; failures and stage errors are
//! recorded in the report rather than aborting.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use yexp_core::linalg::{identity, max_abs};
use yexp_core::qsys::{check_qsol_properties, check_restricted_qsystem, closed_form_residual, QTable};
use yexp_core::quiver::{build_mutation_loop, MutationLoop};
use yexp_core::spectral::lemma::{eigen_residual, lemma_eigenvector, lemma_order, lemma_special_vector};
use yexp_core::spectral::poly::{closed_form_charpoly, conjectured_charpoly, verify_conjecture};
use yexp_core::spectral::relations::{bd_relation_residual, c_relation_residuals, Form};
use yexp_core::spectral::typec::{
    c_blocks, unit_circle_samples, verify_c_reduction, verify_conjecture_csol, CsolForm, LForm,
};
use yexp_core::spectral::{coefficient_deviation, expected_exponents, spectrum};
use yexp_core::tol::{self, Tolerances};
use yexp_core::yseed::{check_periodicity, fd_jacobian, fixed_point_residual, loop_jacobian};
use yexp_core::ysys::{
    check_ysystem, eta_from_y, level2_y_solution, max_deviation, newton_fixed_point, printed_y_values, y_from_q,
    Calibration, YSolution,
};
use yexp_core::{DynkinType, Family, RootSystem};

/// Random points per periodicity check.
pub const PERIODICITY_POINTS: usize = 20;
/// Largest rank at which the KR vanishing check is run.
pub const VANISHING_MAX_RANK: usize = 10;

#[derive(Clone, Debug)]
pub struct Config {
    pub tol: Tolerances,
    pub samples: usize,
    pub seed: u64,
    pub csol_form: CsolForm,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub residual: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(residual: f64, tol: f64) -> Check {
        Check { residual, pass: residual <= tol }
    }

    fn failed() -> Check {
        Check { residual: f64::NAN, pass: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationInfo {
    pub q_reading: String,
    pub y_reading: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    #[serde(rename = "type")]
    pub family: String,
    pub rank: usize,
    pub level: u32,
    pub period: u32,
    pub n_vertices: usize,
    pub seed: u64,
    pub exponents: Vec<u32>,
    pub charpoly: Vec<f64>,
    pub checks: BTreeMap<String, Check>,
    pub calibration: CalibrationInfo,
    pub errors: Vec<String>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.checks.values().all(|c| c.pass)
    }

    pub fn key(&self) -> (String, usize) {
        (self.family.clone(), self.rank)
    }

    pub fn text(&self) -> String {
        let mut s = format!(
            "{}{} level={} P={} N={} seed={}\n",
            self.family, self.rank, self.level, self.period, self.n_vertices, self.seed
        );
        for (name, c) in &self.checks {
            s += &format!("  {name:<18} {:>10.2e}  {}\n", c.residual, if c.pass { "PASS" } else { "FAIL" });
        }
        for e in &self.errors {
            s += &format!("  error: {e}\n");
        }
        s
    }

    fn record(&mut self, name: &str, check: Check) {
        self.checks.insert(name.to_string(), check);
    }

    fn stage<T>(&mut self, name: &str, r: yexp_core::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(format!("{name}: {e}"));
                self.record(name, Check::failed());
                None
            }
        }
    }
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.1..10.0)).collect()
}

pub fn csol_form(form: crate::args::CsolFormArg) -> CsolForm {
    match form {
        crate::args::CsolFormArg::Printed => CsolForm::Printed,
        crate::args::CsolFormArg::Corrected => CsolForm::Corrected,
    }
}

pub fn verify_case(ty: DynkinType, cal: &Calibration, cfg: &Config) -> CaseReport {
    let rs = RootSystem::new(ty);
    let mut rep = CaseReport {
        family: ty.family.to_string(),
        rank: ty.rank,
        level: 2,
        period: ty.period(2),
        n_vertices: 0,
        seed: cfg.seed,
        exponents: Vec::new(),
        charpoly: Vec::new(),
        checks: BTreeMap::new(),
        calibration: CalibrationInfo { q_reading: cal.q_reading.to_string(), y_reading: cal.y_reading.to_string() },
        errors: Vec::new(),
    };
    let Some(lp) = rep.stage("mutation_loop", build_mutation_loop(ty)) else {
        return rep;
    };
    rep.n_vertices = lp.n_vertices();
    let t = &cfg.tol;

    systems(&mut rep, &rs, cal, t);
    let ys = rep.stage("y_solution", level2_y_solution(&rs, cal));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    for _ in 0..PERIODICITY_POINTS {
        let y = random_point(&mut rng, lp.n_vertices());
        match check_periodicity(&lp, &y, rep.period) {
            Ok(r) => worst = worst.max(r),
            Err(e) => {
                rep.errors.push(format!("periodicity: {e}"));
                worst = f64::NAN;
            }
        }
    }
    rep.record("periodicity", Check::new(worst, t.periodicity));

    let Some(ys) = ys else { return rep };
    let Some(eta) = rep.stage("fixed_point", eta_from_y(&lp, &ys)) else {
        return rep;
    };
    if let Some((r, _)) = rep.stage("fixed_point", fixed_point_residual(&lp, &eta)) {
        rep.record("fixed_point", Check::new(r, t.fixed_point));
    }
    if let Some(nt) = rep.stage("newton", newton_fixed_point(&lp, &vec![1.0; eta.len()], 200)) {
        let dev = nt.eta.iter().zip(&eta).map(|(a, b)| tol::rel(*a, *b)).fold(0.0, f64::max);
        rep.record("newton", Check::new(dev, t.newton));
    }

    jacobian_checks(&mut rep, &lp, &eta, t);
    spectral_checks(&mut rep, &rs, &lp, &eta, t);
    match ty.family {
        Family::C => type_c_checks(&mut rep, &lp, &eta, &ys, cfg),
        Family::B | Family::D if ty.rank.is_multiple_of(2) => lemma_checks(&mut rep, &lp, &eta, t),
        _ => {}
    }
    rep
}

fn systems(rep: &mut CaseReport, rs: &RootSystem, cal: &Calibration, t: &Tolerances) {
    let Some(qt) = rep.stage("q_system", QTable::build(rs, 2)) else {
        return;
    };
    rep.record("q_system", Check::new(check_restricted_qsystem(rs, &qt, cal.q_reading), t.qy_system));
    rep.record("q_closed_form", Check::new(closed_form_residual(rs, &qt), t.qy_system));
    let vanish = rs.rank() <= VANISHING_MAX_RANK;
    if let Some(q) = rep.stage("qsol", check_qsol_properties(rs, &qt, vanish)) {
        let r = q.symmetry.max(q.vanishing.unwrap_or(0.0));
        rep.record("qsol", Check { residual: r, pass: q.passes(t.qy_system) });
    }
    let ys = y_from_q(rs, &qt, cal.q_reading);
    rep.record("y_system", Check::new(check_ysystem(rs, &ys, cal.y_reading), t.qy_system));
    if let Some(p) = printed_y_values(rs.ty) {
        rep.record("printed_y", Check::new(max_deviation(&ys, &p), t.printed_y));
    }
}

fn jacobian_checks(rep: &mut CaseReport, lp: &MutationLoop, eta: &[f64], t: &Tolerances) {
    let Some(j) = rep.stage("jacobian_fd", loop_jacobian(lp, eta)) else {
        return;
    };
    if let Some(fd) = rep.stage("jacobian_fd", fd_jacobian(lp, eta, tol::FD_STEP)) {
        rep.record("jacobian_fd", Check::new(max_abs(&(&j.matrix - fd)), t.fd_jacobian));
    }
    let mut pw = j.matrix.clone();
    for _ in 1..rep.period {
        pw = &pw * &j.matrix;
    }
    let n = pw.nrows();
    rep.record("jacobian_power", Check::new(max_abs(&(pw - identity(n))), t.jacobian_power));
}

fn spectral_checks(rep: &mut CaseReport, rs: &RootSystem, lp: &MutationLoop, eta: &[f64], t: &Tolerances) {
    let ty = rs.ty;
    if let Some(sp) = rep.stage("spectrum", spectrum(lp, eta, 2)) {
        let sym = sp.exponents.conjugation_symmetric();
        let snap = sp.snap_error.max(sp.unit_circle_error);
        rep.record("spectrum", Check { residual: snap, pass: snap <= t.root_snap && sym });
        let same = sp.exponents == expected_exponents(ty);
        rep.record("exponents", Check { residual: if same { 0.0 } else { 1.0 }, pass: same });
        if let Some(cf) = closed_form_charpoly(ty) {
            rep.record("closed_form", Check::new(coefficient_deviation(&sp.charpoly, &cf), t.charpoly));
        }
        if let Some(conj) = rep.stage("conjecture_38", conjectured_charpoly(rs, 2)) {
            rep.record("division", Check::new(conj.remainder, t.division));
            rep.record("conjecture_38", Check::new(verify_conjecture(&sp.charpoly, &conj), t.charpoly));
        }
        rep.exponents = sp.exponents.exponents;
        rep.charpoly = sp.charpoly;
    }
}

fn lemma_checks(rep: &mut CaseReport, lp: &MutationLoop, eta: &[f64], t: &Tolerances) {
    let ty = lp.ty();
    let Some(j) = rep.stage("lemma_vectors", loop_jacobian(lp, eta)) else {
        return;
    };
    let j = j.matrix;
    let mut worst = 0.0f64;
    if let Some(order) = rep.stage("lemma_vectors", lemma_order(ty)) {
        for a in 1..order {
            if let Ok((lam, v)) = lemma_eigenvector(ty, a) {
                worst = worst.max(eigen_residual(&j, lam, &v));
            }
        }
    }
    if let Ok((lam, v)) = lemma_special_vector(ty) {
        worst = worst.max(eigen_residual(&j, lam, &v));
    }
    rep.record("lemma_vectors", Check::new(worst, t.lemma));
    if let Some(r) = rep.stage("relations", bd_relation_residual(ty, &j, Form::Corrected)) {
        rep.record("relations", Check::new(r, t.relations));
    }
}

fn type_c_checks(rep: &mut CaseReport, lp: &MutationLoop, eta: &[f64], ys: &YSolution, cfg: &Config) {
    let ty = lp.ty();
    let t = &cfg.tol;
    let Some(jac) = rep.stage("c_blocks", loop_jacobian(lp, eta)) else {
        return;
    };
    if let Some(b) = rep.stage("c_blocks", c_blocks(ty, &jac.matrix, ys)) {
        rep.record("c_blocks", Check::new(b.off_block.max(b.printed_residual()), t.blocks));
        let red = verify_c_reduction(&b, &jac.matrix, ys, &unit_circle_samples(cfg.samples), LForm::Corrected);
        rep.record("c_reduction", Check::new(red.k.max(red.l).max(red.full), t.identity));
    }
    let cs = verify_conjecture_csol(ys, &unit_circle_samples(cfg.samples), cfg.csol_form);
    rep.record("csol", Check::new(cs.max(), t.identity));
    if ty.rank.is_multiple_of(2) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let psi: Vec<f64> = (0..lp.n_vertices()).map(|_| rng.random_range(-1.0..1.0)).collect();
        if let Some(m) = rep.stage("relations", c_relation_residuals(ty, ys, &jac, &psi, Form::Corrected)) {
            rep.record("relations", Check::new(m.values().fold(0.0, |a: f64, b| a.max(*b)), t.relations));
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CsolReport {
    pub rank: usize,
    pub form: String,
    pub samples: usize,
    pub det_k: f64,
    pub det_l: f64,
    pub csol: Check,
    pub c_reduction: Check,
}

pub fn csol_case(n: usize, cal: &Calibration, cfg: &Config) -> yexp_core::Result<CsolReport> {
    let ty = DynkinType::new(Family::C, n)?;
    let rs = RootSystem::new(ty);
    let ys = level2_y_solution(&rs, cal)?;
    let lp = build_mutation_loop(ty)?;
    let eta = eta_from_y(&lp, &ys)?;
    let jac = loop_jacobian(&lp, &eta)?;
    let samples = unit_circle_samples(cfg.samples);
    let blocks = c_blocks(ty, &jac.matrix, &ys)?;
    let red = verify_c_reduction(&blocks, &jac.matrix, &ys, &samples, LForm::Corrected);
    let cs = verify_conjecture_csol(&ys, &samples, cfg.csol_form);
    Ok(CsolReport {
        rank: n,
        form: format!("{:?}", cfg.csol_form).to_lowercase(),
        samples: cfg.samples,
        det_k: cs.k,
        det_l: cs.l,
        csol: Check::new(cs.max(), cfg.tol.identity),
        c_reduction: Check::new(red.k.max(red.l).max(red.full), cfg.tol.identity),
    })
}
