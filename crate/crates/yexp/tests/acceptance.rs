//! One PASS/FAIL line per acceptance criterion. Exits nonzero only when a
//! criterion fails that is not listed in `EXPECTED_FAILURES`.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use yexp_core::linalg::{identity, max_abs};
use yexp_core::qsys::{check_qsol_properties, check_restricted_qsystem, closed_form_residual, QTable};
use yexp_core::quiver::{build_mutation_loop, mutate_sequence, MutationLoop, Quiver};
use yexp_core::spectral::lemma::{eigen_residual, lemma_eigenvector, lemma_order, lemma_special_vector};
use yexp_core::spectral::poly::{closed_form_charpoly, conjectured_charpoly, verify_conjecture};
use yexp_core::spectral::relations::{bd_relation_residual, c_relation_residuals, Form};
use yexp_core::spectral::typec::{
    c_blocks, c_exponent_template, unit_circle_samples, verify_c_reduction, verify_conjecture_csol, CsolForm, LForm,
};
use yexp_core::spectral::{coefficient_deviation, spectrum, SpectralReport};
use yexp_core::tol;
use yexp_core::yseed::{check_periodicity, fd_jacobian, loop_jacobian, mutate_values, YSeed};
use yexp_core::ysys::{
    assemble_eta, calibrate, check_ysystem, level2_y_solution, max_deviation, newton_fixed_point, printed_y_values,
    y_from_q, Calibration, YSolution,
};
use yexp_core::{DynkinType, Family, RootSystem};

/// The cosine products with the angles exactly as stated are not zero at
/// the Jacobian's eigenvalues, so this criterion cannot pass as written.
const EXPECTED_FAILURES: &[&str] = &["C10"];

type Outcome = Result<(bool, String), String>;

type Criterion = (&'static str, &'static str, fn(&Lab) -> Outcome);

struct Lab {
    cal: Calibration,
}

struct Case {
    ty: DynkinType,
    rs: RootSystem,
    lp: MutationLoop,
    ys: YSolution,
    eta: Vec<f64>,
    fixed_point: f64,
}

impl Lab {
    fn case(&self, f: Family, n: usize) -> Result<Case, String> {
        let ty = DynkinType::new(f, n).map_err(|e| e.to_string())?;
        let rs = RootSystem::new(ty);
        let ys = level2_y_solution(&rs, &self.cal).map_err(|e| format!("{ty}: {e}"))?;
        let lp = build_mutation_loop(ty).map_err(|e| format!("{ty}: {e}"))?;
        let pt = assemble_eta(&lp, &ys, tol::FIXED_POINT).map_err(|e| format!("{ty}: {e}"))?;
        Ok(Case { ty, rs, lp, ys, eta: pt.eta, fixed_point: pt.residual })
    }

    fn spectrum(&self, c: &Case) -> Result<SpectralReport, String> {
        spectrum(&c.lp, &c.eta, 2).map_err(|e| format!("{}: {e}", c.ty))
    }
}

fn ty(f: Family, n: usize) -> DynkinType {
    DynkinType::new(f, n).expect("rank in range")
}

fn example_quiver() -> Quiver {
    Quiver::from_arrows(4, &[(0, 1, 1), (1, 2, 2), (1, 3, 1), (3, 0, 1)]).expect("valid quiver")
}

fn random_quiver(rng: &mut ChaCha8Rng) -> Quiver {
    let n = rng.random_range(1..=8);
    let mut arrows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w: i32 = rng.random_range(-3..=3);
            if w > 0 {
                arrows.push((i, j, w as u32));
            } else if w < 0 {
                arrows.push((j, i, (-w) as u32));
            }
        }
    }
    Quiver::from_arrows(n, &arrows).expect("no 2-cycles by construction")
}

fn c1(_: &Lab) -> Outcome {
    let t0 = Instant::now();
    let got = example_quiver().mutate(1).map_err(|e| e.to_string())?;
    let mut arrows = got.arrow_list();
    arrows.sort_unstable();
    let mut want = vec![(1, 0, 1), (0, 2, 2), (2, 1, 2), (3, 1, 1)];
    want.sort_unstable();
    let example = arrows == want;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = 0;
    for _ in 0..1000 {
        let q = random_quiver(&mut rng);
        let k = rng.random_range(0..q.n_vertices());
        if q.mutate(k).and_then(|m| m.mutate(k)).map_or(true, |b| b != q) {
            bad += 1;
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    Ok((example && bad == 0 && secs < 1.0, format!("example={example} involution failures={bad}/1000 runtime={secs:.3}s")))
}

fn c2(_: &Lab) -> Outcome {
    let q = example_quiver();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let (mut worst, mut invol) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let y: Vec<f64> = (0..4).map(|_| rng.random_range(0.01..50.0)).collect();
        let s = YSeed::new(q.clone(), y.clone()).map_err(|e| e.to_string())?;
        let got = s.mutate(1).map_err(|e| e.to_string())?.values;
        let inv = 1.0 / y[1];
        let want = [y[0] * (y[1] + 1.0), inv, y[2] / (inv + 1.0).powi(2), y[3] / (inv + 1.0)];
        for (a, b) in got.iter().zip(want) {
            worst = worst.max(tol::rel(*a, b));
        }
        for k in 0..4 {
            let back = s.mutate(k).and_then(|m| m.mutate(k)).map_err(|e| e.to_string())?;
            for (a, b) in back.values.iter().zip(&y) {
                invol = invol.max(tol::rel(*a, *b));
            }
        }
    }
    Ok((worst <= 1e-12 && invol <= 1e-12, format!("example residual={worst:.1e} involution residual={invol:.1e} at 100 points")))
}

fn c3(_: &Lab) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut cases = 0;
    let mut failures = Vec::new();
    for f in Family::ALL {
        for n in f.min_rank()..=10 {
            cases += 1;
            let t = ty(f, n);
            let lp = match build_mutation_loop(t) {
                Ok(lp) if lp.is_loop() => lp,
                _ => {
                    failures.push(format!("{t} loop"));
                    continue;
                }
            };
            let q = &lp.labeled.quiver;
            let reference = mutate_sequence(q, &lp.plus).map_err(|e| e.to_string())?;
            let y0: Vec<f64> = (0..lp.n_vertices()).map(|_| rng.random_range(0.1..10.0)).collect();
            let apply = |order: &[usize]| -> Result<Vec<f64>, String> {
                let mut y = y0.clone();
                let mut cur = q.clone();
                for (s, &k) in order.iter().enumerate() {
                    mutate_values(&cur, &mut y, k, s).map_err(|e| e.to_string())?;
                    cur = cur.mutate(k).map_err(|e| e.to_string())?;
                }
                Ok(y)
            };
            let y_ref = apply(&lp.plus)?;
            for _ in 0..10 {
                let mut order = lp.plus.clone();
                order.shuffle(&mut rng);
                let same_q = mutate_sequence(q, &order).map_err(|e| e.to_string())? == reference;
                let y = apply(&order)?;
                let same_y = y.iter().zip(&y_ref).all(|(a, b)| tol::rel(*a, *b) <= 1e-12);
                if !(same_q && same_y) {
                    failures.push(format!("{t} order"));
                    break;
                }
            }
        }
    }
    Ok((failures.is_empty(), format!("{cases} cases, ranks <= 10, 10 shuffles of mu_+ each; failures {failures:?}")))
}

fn c4(_: &Lab) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let (mut worst, mut slowest) = (0.0f64, (0.0f64, String::new()));
    for f in Family::ALL {
        for n in f.min_rank()..=8 {
            let t0 = Instant::now();
            let t = ty(f, n);
            let lp = build_mutation_loop(t).map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let y: Vec<f64> = (0..lp.n_vertices()).map(|_| rng.random_range(0.1..10.0)).collect();
                worst = worst.max(check_periodicity(&lp, &y, t.period(2)).map_err(|e| e.to_string())?);
            }
            let s = t0.elapsed().as_secs_f64();
            if s > slowest.0 {
                slowest = (s, t.to_string());
            }
        }
    }
    Ok((
        worst <= tol::PERIODICITY && slowest.0 < 5.0,
        format!("max residual={worst:.1e} over 20 points/case, ranks <= 8; slowest {} {:.3}s", slowest.1, slowest.0),
    ))
}

fn c5(lab: &Lab) -> Outcome {
    let (mut fp, mut newton, mut printed) = (0.0f64, 0.0f64, 0.0f64);
    for f in Family::ALL {
        for n in f.min_rank()..=10 {
            let c = lab.case(f, n)?;
            fp = fp.max(c.fixed_point);
            let nt = newton_fixed_point(&c.lp, &vec![1.0; c.eta.len()], 200).map_err(|e| format!("{}: {e}", c.ty))?;
            newton = newton.max(nt.eta.iter().zip(&c.eta).map(|(a, b)| tol::rel(*a, *b)).fold(0.0, f64::max));
            if let Some(p) = printed_y_values(c.ty) {
                let qt = QTable::build(&c.rs, 2).map_err(|e| e.to_string())?;
                printed = printed.max(max_deviation(&y_from_q(&c.rs, &qt, lab.cal.q_reading), &p));
            }
        }
    }
    Ok((
        fp <= tol::FIXED_POINT && newton <= tol::NEWTON_AGREEMENT && printed <= tol::PRINTED_Y,
        format!("fixed point={fp:.1e} newton={newton:.1e} printed B/D Y={printed:.1e}, ranks <= 10"),
    ))
}

fn c6(lab: &Lab) -> Outcome {
    let (mut fd, mut pw) = (0.0f64, 0.0f64);
    for f in Family::ALL {
        for n in f.min_rank()..=8 {
            let c = lab.case(f, n)?;
            let j = loop_jacobian(&c.lp, &c.eta).map_err(|e| e.to_string())?.matrix;
            let d = fd_jacobian(&c.lp, &c.eta, tol::FD_STEP).map_err(|e| e.to_string())?;
            fd = fd.max(max_abs(&(&j - d)));
            let mut p = j.clone();
            for _ in 1..c.ty.period(2) {
                p = &p * &j;
            }
            let k = p.nrows();
            pw = pw.max(max_abs(&(p - identity(k))));
        }
    }
    Ok((fd <= tol::FD_JACOBIAN && pw <= tol::JACOBIAN_POWER, format!("analytic vs FD={fd:.1e} J^P-I={pw:.1e}, ranks <= 8")))
}

fn closed_form_family(lab: &Lab, f: Family, ranks: std::ops::RangeInclusive<usize>) -> Outcome {
    let mut worst = 0.0f64;
    let mut wrong = Vec::new();
    for n in ranks {
        let c = lab.case(f, n)?;
        let sp = lab.spectrum(&c)?;
        let cf = closed_form_charpoly(c.ty).expect("closed form exists");
        worst = worst.max(coefficient_deviation(&sp.charpoly, &cf));
        let nn = n as u32;
        let mut want: Vec<u32> = if f == Family::B {
            (1..=2 * nn).map(|k| 2 * k).chain([2 * nn + 1]).collect()
        } else {
            (1..nn).map(|k| 2 * k).chain([nn]).collect()
        };
        want.sort_unstable();
        if sp.exponents.exponents != want || sp.exponents.period != c.ty.period(2) {
            wrong.push(c.ty.to_string());
        }
    }
    Ok((worst <= tol::CHARPOLY && wrong.is_empty(), format!("charpoly deviation={worst:.1e}; exponent mismatches {wrong:?}")))
}

fn c7(lab: &Lab) -> Outcome {
    closed_form_family(lab, Family::B, 2..=8)
}

fn c8(lab: &Lab) -> Outcome {
    closed_form_family(lab, Family::D, 4..=10)
}

fn c9(lab: &Lab) -> Outcome {
    let (mut rem, mut imag, mut quo) = (0.0f64, 0.0f64, 0.0f64);
    let mut inexact = Vec::new();
    for f in Family::ALL {
        for n in f.min_rank()..=10 {
            let t = ty(f, n);
            let rs = RootSystem::new(t);
            let conj = conjectured_charpoly(&rs, 2).map_err(|e| e.to_string())?;
            rem = rem.max(conj.remainder);
            imag = imag.max(conj.quotient_imag);
            if conj.quotient_roots.is_none() {
                inexact.push(t.to_string());
            }
            let compare = match f {
                Family::A => n <= 6,
                _ => true,
            };
            if compare {
                let c = lab.case(f, n)?;
                let sp = lab.spectrum(&c)?;
                quo = quo.max(verify_conjecture(&sp.charpoly, &conj));
            }
        }
    }
    Ok((
        rem <= tol::DIVISION && imag <= 1e-9 && quo <= tol::CHARPOLY && inexact.is_empty(),
        format!(
            "remainder={rem:.1e} imag={imag:.1e} quotient vs charpoly={quo:.1e} (A<=6, B, C, D <= 10); inexact {inexact:?}"
        ),
    ))
}

fn c10(lab: &Lab) -> Outcome {
    let t0 = Instant::now();
    let s16 = unit_circle_samples(16);
    let s32 = unit_circle_samples(32);
    let (mut blocks, mut red, mut full, mut printed, mut corrected) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut template = true;
    for n in 3..=10 {
        let c = lab.case(Family::C, n)?;
        let j = loop_jacobian(&c.lp, &c.eta).map_err(|e| e.to_string())?.matrix;
        let b = c_blocks(c.ty, &j, &c.ys).map_err(|e| e.to_string())?;
        blocks = blocks.max(b.off_block).max(b.printed_residual());
        let r = verify_c_reduction(&b, &j, &c.ys, &s16, LForm::Corrected);
        red = red.max(r.k).max(r.l);
        full = full.max(r.full);
        printed = printed.max(verify_conjecture_csol(&c.ys, &s32, CsolForm::Printed).max());
        corrected = corrected.max(verify_conjecture_csol(&c.ys, &s32, CsolForm::Corrected).max());
        if n <= 4 {
            let sp = lab.spectrum(&c)?;
            template &= sp.exponents.exponents == c_exponent_template(n);
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    let pass = blocks <= tol::BLOCKS
        && red <= tol::IDENTITY
        && full <= tol::IDENTITY
        && printed <= tol::IDENTITY
        && template
        && secs < 30.0;
    Ok((
        pass,
        format!(
            "n=3..10 blocks={blocks:.1e} reductions={red:.1e} full identity={full:.1e} template n=3,4 {template}; \
             Csol as stated={printed:.1e}, with doubled angles={corrected:.1e}; runtime={secs:.2}s"
        ),
    ))
}

fn c11(lab: &Lab) -> Outcome {
    let (mut lemma, mut rel) = (0.0f64, 0.0f64);
    let mut vectors = 0;
    for f in [Family::B, Family::D] {
        for n in [4, 6, 8] {
            let c = lab.case(f, n)?;
            let j = loop_jacobian(&c.lp, &c.eta).map_err(|e| e.to_string())?.matrix;
            for a in 1..lemma_order(c.ty).map_err(|e| e.to_string())? {
                let (lam, v) = lemma_eigenvector(c.ty, a).map_err(|e| e.to_string())?;
                lemma = lemma.max(eigen_residual(&j, lam, &v));
                vectors += 1;
            }
            let (lam, v) = lemma_special_vector(c.ty).map_err(|e| e.to_string())?;
            lemma = lemma.max(eigen_residual(&j, lam, &v));
            vectors += 1;
            rel = rel.max(bd_relation_residual(c.ty, &j, Form::Corrected).map_err(|e| e.to_string())?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    for n in [4, 6, 8] {
        let c = lab.case(Family::C, n)?;
        let jac = loop_jacobian(&c.lp, &c.eta).map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let psi: Vec<f64> = (0..c.lp.n_vertices()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let m = c_relation_residuals(c.ty, &c.ys, &jac, &psi, Form::Corrected).map_err(|e| e.to_string())?;
            rel = m.values().fold(rel, |a, b| a.max(*b));
        }
    }
    Ok((
        lemma <= tol::LEMMA && rel <= tol::RELATIONS,
        format!("{vectors} lemma vectors residual={lemma:.1e}; B/D/C relations={rel:.1e}"),
    ))
}

fn c12(lab: &Lab) -> Outcome {
    let (mut closed, mut qsys, mut ysys, mut vanish) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut qsol_ok = true;
    for f in Family::ALL {
        for n in f.min_rank()..=10 {
            let rs = RootSystem::new(ty(f, n));
            let qt = QTable::build(&rs, 2).map_err(|e| e.to_string())?;
            closed = closed.max(closed_form_residual(&rs, &qt));
            qsys = qsys.max(check_restricted_qsystem(&rs, &qt, lab.cal.q_reading));
            let rep = check_qsol_properties(&rs, &qt, true).map_err(|e| e.to_string())?;
            qsol_ok &= rep.passes(tol::QY_SYSTEM);
            vanish = vanish.max(rep.vanishing.unwrap_or(f64::NAN));
            let ys = level2_y_solution(&rs, &lab.cal).map_err(|e| e.to_string())?;
            ysys = ysys.max(check_ysystem(&rs, &ys, lab.cal.y_reading));
        }
    }
    let logged = lab.cal.log_lines().len();
    Ok((
        closed <= tol::QY_SYSTEM && qsys <= tol::QY_SYSTEM && ysys <= tol::QY_SYSTEM && qsol_ok && logged > 0,
        format!(
            "closed forms={closed:.1e} Q-system={qsys:.1e} Qsol 1-3 {qsol_ok} (vanishing={vanish:.1e}) Y-system={ysys:.1e}; \
             calibration: Q [{}], Y [{}], {logged} log lines",
            lab.cal.q_reading, lab.cal.y_reading
        ),
    ))
}

fn main() {
    let t0 = Instant::now();
    let cal = match calibrate(tol::QY_SYSTEM) {
        Ok(c) => c,
        Err(e) => {
            println!("calibration failed: {e}");
            std::process::exit(1);
        }
    };
    for line in cal.log_lines() {
        println!("calibration: {line}");
    }
    let lab = Lab { cal };
    let criteria: [Criterion; 12] = [
        ("C1", "quiver engine", c1),
        ("C2", "Y-seed engine", c2),
        ("C3", "mutation loop validity", c3),
        ("C4", "periodicity", c4),
        ("C5", "fixed point", c5),
        ("C6", "Jacobian correctness", c6),
        ("C7", "type B characteristic polynomial", c7),
        ("C8", "type D characteristic polynomial", c8),
        ("C9", "N/D quotient", c9),
        ("C10", "type C blocks and cosine products", c10),
        ("C11", "eigenvector lemmas and relations", c11),
        ("C12", "Q/Y-systems", c12),
    ];
    let mut unexpected = Vec::new();
    for (id, title, f) in criteria {
        let t = Instant::now();
        let (pass, detail) = match f(&lab) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let expected = EXPECTED_FAILURES.contains(&id);
        let note = match (pass, expected) {
            (false, true) => " [expected failure]",
            (true, true) => " [listed as expected failure but passed]",
            _ => "",
        };
        println!(
            "[{}] {id} {title}: {detail} ({:.2}s){note}",
            if pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
        if pass == expected {
            unexpected.push(id);
        }
    }
    println!("total {:.2}s", t0.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        println!("unexpected outcomes: {unexpected:?}");
        std::process::exit(1);
    }
}
