//! One line per acceptance criterion. Every identity is exact except the
//! numeric convergence slope (1.0 +- 0.1) and the suite time budget (600 s).

use std::process::ExitCode;

use mcqc::{run, Check, Job, Options};
use mcqc_core::exactcore::{rat, QParams, Rat, RatFun};
use mcqc_core::limit4d::{limit_suite, rate_entry, RSubstitution};
use mcqc_core::partfun::{crosscheck_fermionic, Crosscheck, Window};
use mcqc_core::report::Entry;
use mcqc_core::{fock, partitions, qcurve};

const SLOPE_TOLERANCE: f64 = 0.1;
const SUITE_BUDGET_S: f64 = 600.0;
const DOMINANT_SHARE: f64 = 0.5;

fn ok(entries: &[Entry]) -> bool {
    !entries.is_empty() && entries.iter().all(Entry::passed)
}

fn failures(entries: &[Entry]) -> String {
    entries.iter().filter(|e| !e.passed()).map(|e| format!("{}: {}", e.name, e.witness)).collect::<Vec<_>>().join("; ")
}

fn job(check: Check) -> Job {
    Job::new(check, &Options::default()).expect("default options are valid")
}

/// `(X - h)[(X - 2h)/(X - h) - (X - h)/X] + h^2/X` as a rational function.
fn hand_case(h: &Rat) -> RatFun {
    let x = RatFun::x();
    let c = |v: Rat| RatFun::constant(v);
    let xm = |k: i64| x.sub(&c(h * rat(k)));
    let bracket = xm(2).div(&xm(1)).unwrap().sub(&xm(1).div(&x).unwrap());
    xm(1).mul(&bracket).add(&c(h * h).div(&x).unwrap())
}

fn criterion(n: u32, what: &str, f: impl FnOnce() -> (bool, String)) -> bool {
    let start = std::time::Instant::now();
    let (pass, detail) = f();
    let tag = if pass { "PASS" } else { "FAIL" };
    let secs = start.elapsed().as_secs_f64();
    if detail.is_empty() {
        println!("criterion {n:>2} {tag}  {what} ({secs:.1} s)");
    } else {
        println!("criterion {n:>2} {tag}  {what} ({secs:.1} s): {detail}");
    }
    pass
}

fn main() -> ExitCode {
    let p = QParams::default_params();
    let sub = RSubstitution::new(rat(1), rat(1)).unwrap();
    let mut all = true;

    all &= criterion(1, "MacMahon triple identity through q^12, exact", || {
        let e = [partitions::macmahon_check(12)];
        (ok(&e), failures(&e))
    });

    all &= criterion(2, "hook formula = Jacobi-Trudi for |lambda| <= 8; sum dim^2 = n! for n <= 7, exact", || {
        let e = [partitions::hook_formula_check(&p, 8, 7).unwrap()];
        (ok(&e), failures(&e))
    });

    all &= criterion(3, "Z(t) = fermionic vevs through Q^5, t_1..t_3 degree 2; g2' = prefactor g through Q^3, exact", || {
        let w = Window { ncut: 5, kmax: 3, dt: 2 };
        let mut e = crosscheck_fermionic(&p, Crosscheck::ZtEH, w).unwrap();
        e.extend(crosscheck_fermionic(&p, Crosscheck::ZtG1, w).unwrap());
        e.extend(crosscheck_fermionic(&p, Crosscheck::ZtDual, w).unwrap());
        e.push(fock::check_g_state_identity(&p, 3, 3).unwrap());
        (ok(&e), failures(&e))
    });

    all &= criterion(4, "product and sum forms of A have identical normal forms, exact", || {
        let e = [qcurve::check_a_forms(&p).unwrap()];
        (ok(&e), failures(&e))
    });

    all &= criterion(5, "quantum curve residual zero as rational functions for Q^0..Q^6, exact", || {
        let e = [qcurve::qcurve_residual(&p, 6).unwrap()];
        (ok(&e), failures(&e))
    });

    all &= criterion(6, "A Phi_j = q^-j Phi_j for j <= 3, width 16, Q^3; Z = C prod Phi_0 with constant C, exact", || {
        let e = [qcurve::kac_schwarz_check(&p, 3, 16, 3).unwrap(), qcurve::z_phi0_constant(&p, 3, 12).unwrap()];
        (ok(&e), failures(&e))
    });

    all &= criterion(7, "4D curve residual zero for w^0..w^6, with the hand-checked w^1 case, exact", || {
        let e = [qcurve::residual_4d(&rat(1), 6).unwrap()];
        let hand = hand_case(&rat(1)).is_zero() && hand_case(&rat(3)).is_zero();
        (ok(&e) && hand, if hand { failures(&e) } else { "hand-checked case nonzero".into() })
    });

    all &= criterion(8, "4D limit lemmas as exact R-series for |lambda| <= 4, k <= 4; slope 1 +- 0.1", || {
        let mut e = limit_suite(&sub, 4, 4);
        let rate = rate_entry(&sub, 5.0);
        let slope = rate.witness["slope_n3"].as_f64().unwrap_or(f64::NAN);
        let slope_ok = (slope - 1.0).abs() <= SLOPE_TOLERANCE;
        e.push(rate);
        (ok(&e) && slope_ok, format!("slope {slope:.4}{}", if ok(&e) { String::new() } else { format!("; {}", failures(&e)) }))
    });

    all &= criterion(9, "Fay N=2,3, Hirota-Miwa, differential Fay, 4D Fay and the R^2 bridge through degree 4, exact", || {
        let mut e = mcqc::fay(&job(Check::VerifyFay));
        e.extend(mcqc::fay_4d(&job(Check::VerifyFay4d)));
        (ok(&e), failures(&e))
    });

    all &= criterion(10, "default suite under 600 s; enumeration and series multiplication dominate the profile", || {
        let report = run(&job(Check::Suite), true);
        let prof = report.profile.clone().unwrap_or_default();
        let get = |k: &str| prof[k].as_f64().unwrap_or(0.0);
        let total: f64 = ["partition_enumeration", "series_multiplication", "rational_function", "fock_operator"]
            .iter()
            .map(|k| get(k))
            .sum();
        let share = (get("partition_enumeration") + get("series_multiplication")) / total;
        let pass = report.all_pass() && report.wall_time_s < SUITE_BUDGET_S && share > DOMINANT_SHARE;
        (pass, format!("{:.1} s, {} entries, dominant share {:.2}, profile {prof}", report.wall_time_s, report.entries.len(), share))
    });

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
