//! Job configuration, check dispatch and JSON reports for the `mcqc` driver.

use std::time::Instant;

use clap::{Args, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use mcqc_core::bilinear::{self, Form, Model, Table};
use mcqc_core::exactcore::{parse_rat, rat, ratio, QParams, Rat};
use mcqc_core::limit4d::{self, RSubstitution};
use mcqc_core::partfun::{self, Crosscheck, Window};
use mcqc_core::report::{rat_json, series_json, Entry, Status};
use mcqc_core::{fock, partitions, profile, qcurve};

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Plane partitions vs Schur squares vs the MacMahon product (V = --ncut, default 12), and the hook formula.
    VerifyMacmahon,
    /// Current commutators, vertex-operator matrix elements and the g-state identity.
    VerifyFock,
    /// Partition sums against their fermionic expressions.
    VerifyZCrosscheck,
    /// Operator normal forms and the quantum curve (default --ncut 6).
    VerifyQcurve,
    /// Kac-Schwarz eigenfunctions and Z(x) = C prod (1 - Q q^n)^{-n} Phi_0 (default --ncut 3).
    VerifyKacSchwarz,
    /// The 4D difference equation (default --ncut 6).
    #[command(name = "verify-4d-curve")]
    #[serde(rename = "verify-4d-curve")]
    Verify4dCurve,
    /// R-series checks of the 4D limit and the numeric convergence rate.
    VerifyLimits,
    /// Fay, Hirota-Miwa and differential Fay identities (default --ncut 4).
    VerifyFay,
    /// The 4D three-term identity and its 5D origin (default --ncut 4).
    #[command(name = "verify-fay-4d")]
    #[serde(rename = "verify-fay-4d")]
    VerifyFay4d,
    /// Prints Z with insertions at --points.
    ComputeZ,
    /// Every verification at its default window.
    Suite,
}

impl Check {
    pub const SUITE: [Check; 9] = [
        Check::VerifyMacmahon,
        Check::VerifyFock,
        Check::VerifyZCrosscheck,
        Check::VerifyQcurve,
        Check::VerifyKacSchwarz,
        Check::Verify4dCurve,
        Check::VerifyLimits,
        Check::VerifyFay,
        Check::VerifyFay4d,
    ];
}

/// Options shared by every check. Rationals are written `p/q`.
#[derive(Args, Clone, Debug)]
pub struct Options {
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "2/3")]
    pub u: String,
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "1")]
    pub hbar: String,
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "1")]
    pub lambda: String,
    /// Fugacity window; each check documents its own default.
    #[arg(long, global = true)]
    pub ncut: Option<u32>,
    /// Degree in x for series in the insertion variable.
    #[arg(long, global = true, default_value_t = 12)]
    pub xdeg: u32,
    /// Total degree in the couplings t_1..t_3.
    #[arg(long, global = true, default_value_t = 2)]
    pub tdeg: u32,
    /// Largest Kac-Schwarz index.
    #[arg(long, global = true, default_value_t = 3)]
    pub jmax: u32,
    /// Comma-separated insertion points.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub points: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub json: Option<std::path::PathBuf>,
    /// Record per-kernel timings in the report.
    #[arg(long, global = true)]
    pub profile: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            u: "2/3".into(),
            hbar: "1".into(),
            lambda: "1".into(),
            ncut: None,
            xdeg: 12,
            tdeg: 2,
            jmax: 3,
            points: None,
            seed: 0,
            json: None,
            profile: false,
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Validated configuration.
#[derive(Clone, Debug)]
pub struct Job {
    pub check: Check,
    pub params: QParams,
    pub hbar: Rat,
    pub lambda: Rat,
    pub ncut: Option<u32>,
    pub xdeg: u32,
    pub tdeg: u32,
    pub jmax: u32,
    pub points: Option<Vec<Rat>>,
    pub seed: u64,
}

impl Job {
    pub fn new(check: Check, o: &Options) -> Result<Self, ConfigError> {
        let parse = |name: &str, s: &str| parse_rat(s).map_err(|e| ConfigError(format!("--{name}: {e}")));
        let params = QParams::new(parse("u", &o.u)?).map_err(|e| ConfigError(format!("--u: {e}")))?;
        let hbar = parse("hbar", &o.hbar)?;
        if hbar == rat(0) {
            return Err(ConfigError("--hbar must be nonzero".into()));
        }
        let lambda = parse("lambda", &o.lambda)?;
        let points = o
            .points
            .as_deref()
            .map(|s| s.split(',').map(|p| parse("points", p)).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        if o.tdeg == 0 && matches!(check, Check::VerifyFay) {
            return Err(ConfigError("--tdeg must be at least 1 for the differential Fay identity".into()));
        }
        Ok(Job {
            check,
            params,
            hbar,
            lambda,
            ncut: o.ncut,
            xdeg: o.xdeg,
            tdeg: o.tdeg,
            jmax: o.jmax,
            points,
            seed: o.seed,
        })
    }

    fn ncut_or(&self, default: u32) -> u32 {
        self.ncut.unwrap_or(default)
    }

    fn sub(&self) -> Result<RSubstitution, mcqc_core::Error> {
        RSubstitution::new(self.hbar.clone(), self.lambda.clone())
    }

    fn echo(&self) -> Value {
        json!({
            "check": self.check,
            "u": rat_json(self.params.u()),
            "hbar": rat_json(&self.hbar),
            "lambda": rat_json(&self.lambda),
            "ncut": self.ncut,
            "xdeg": self.xdeg,
            "tdeg": self.tdeg,
            "jmax": self.jmax,
            "points": self.points.as_ref().map(|p| p.iter().map(rat_json).collect::<Vec<_>>()),
            "seed": self.seed,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub job: Value,
    pub entries: Vec<Entry>,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Value>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(Entry::passed)
    }
}

/// Turns a check that may raise into report entries.
fn guard(name: &str, window: &str, r: Result<Vec<Entry>, mcqc_core::Error>) -> Vec<Entry> {
    r.unwrap_or_else(|e| vec![Entry::error(name, window, &e)])
}

fn one(r: Result<Entry, mcqc_core::Error>, name: &str, window: &str) -> Vec<Entry> {
    guard(name, window, r.map(|e| vec![e]))
}

fn four_points(job: &Job, default: [Rat; 4]) -> Result<[Rat; 4], mcqc_core::Error> {
    match &job.points {
        None => Ok(default),
        Some(p) => p
            .clone()
            .try_into()
            .map_err(|_| mcqc_core::Error::InvalidArgument("--points needs exactly four values here".into())),
    }
}

pub fn macmahon(job: &Job) -> Vec<Entry> {
    let v = job.ncut_or(12);
    let mut out = vec![partitions::macmahon_check(v)];
    out.extend(one(partitions::hook_formula_check(&job.params, 8, 7), "hook formula", "|lambda| <= 8"));
    out
}

pub fn fock_checks(job: &Job) -> Vec<Entry> {
    let mut out = guard("matrix elements", "", fock::check_matrix_elements(&job.params, job.ncut_or(5).min(6)));
    let q = job.ncut_or(3);
    out.extend(one(fock::check_g_state_identity(&job.params, q, q), "g-state identity", ""));
    out
}

pub fn crosschecks(job: &Job) -> Vec<Entry> {
    let w = Window { ncut: job.ncut_or(5), kmax: 3, dt: job.tdeg };
    let mut out = Vec::new();
    for c in [Crosscheck::ZtEH, Crosscheck::ZtG1, Crosscheck::ZtDual, Crosscheck::Z4dEH, Crosscheck::ZCharged] {
        out.extend(guard(&format!("{c:?}"), "", partfun::crosscheck_fermionic(&job.params, c, w)));
    }
    let n = w.ncut.min(4);
    out.extend(one(
        partfun::check_t_x_substitution(&job.params, n, job.xdeg, &ratio(1, 3)),
        "t -> x substitution",
        "",
    ));
    out.extend(one(partfun::check_t_x_substitution_4d(&job.hbar, n, job.xdeg), "T -> X substitution", ""));
    out
}

pub fn qcurve_checks(job: &Job) -> Vec<Entry> {
    let mut out = one(qcurve::check_a_forms(&job.params), "operator normal forms", "");
    out.extend(one(qcurve::qcurve_residual(&job.params, job.ncut_or(6)), "quantum curve", ""));
    out
}

pub fn kac_schwarz(job: &Job) -> Vec<Entry> {
    let q = job.ncut_or(3);
    let width = job.xdeg.max(16);
    let mut out = one(qcurve::kac_schwarz_check(&job.params, job.jmax, width, q), "Kac-Schwarz", "");
    out.extend(one(qcurve::z_phi0_constant(&job.params, q, job.xdeg), "Z = C prod Phi_0", ""));
    out
}

pub fn curve_4d(job: &Job) -> Vec<Entry> {
    one(qcurve::residual_4d(&job.hbar, job.ncut_or(6)), "4D curve", "")
}

pub fn limits(job: &Job) -> Vec<Entry> {
    match job.sub() {
        Ok(sub) => {
            let size = job.ncut_or(4);
            let mut out = limit4d::limit_suite(&sub, size, 4);
            out.push(limit4d::rate_entry(&sub, 5.0));
            out
        }
        Err(e) => vec![Entry::error("4D limits", "", &e)],
    }
}

pub fn fay(job: &Job) -> Vec<Entry> {
    let n = job.ncut_or(4);
    let p = &job.params;
    let t = bilinear::couplings(3, job.tdeg);
    let sample = job.points.clone().unwrap_or_else(|| vec![ratio(1, 2), ratio(1, 3), ratio(1, 5), ratio(1, 7)]);
    let mut out = Vec::new();
    let run = || -> Result<Vec<Entry>, mcqc_core::Error> {
        let plain = Table::new(Model::Crystal(p.clone()), n)?;
        let formal = Table::with_couplings(Model::Crystal(p.clone()), n, &t)?;
        let big_n = if sample.len() == 6 { 3 } else { 2 };
        Ok(vec![
            bilinear::fay_sample_entry(&plain, big_n, &sample)?,
            bilinear::fay_certified(&formal, 2, Form::Direct, job.seed)?,
            bilinear::fay_certified(&plain, 3, Form::Direct, job.seed)?,
            bilinear::hirota_miwa_certified(&formal, job.seed)?,
            bilinear::diff_fay_certified(p, n, &t, job.seed)?,
            bilinear::tau_t1_paths(p, Window { ncut: n, kmax: 3, dt: job.tdeg })?,
        ])
    };
    out.extend(guard("Fay identities", &format!("degree <= {n}"), run()));
    out
}

pub fn fay_4d(job: &Job) -> Vec<Entry> {
    let n = job.ncut_or(4);
    let t = bilinear::couplings(3, job.tdeg);
    let run = || -> Result<Vec<Entry>, mcqc_core::Error> {
        let xs = four_points(job, [rat(3), rat(5), rat(7), rat(11)])?;
        let plain = Table::new(Model::FourD(job.hbar.clone()), n)?;
        let formal = Table::with_couplings(Model::FourD(job.hbar.clone()), n, &t)?;
        Ok(vec![
            bilinear::fay_sample_entry(&plain, 2, &xs)?,
            bilinear::fay_certified(&formal, 2, Form::Direct, job.seed)?,
            bilinear::fay_certified(&formal, 2, Form::Inverse, job.seed)?,
            bilinear::fay_bridge(&job.sub()?, &xs, n)?,
        ])
    };
    guard("4D Fay identities", &format!("degree <= {n}"), run())
}

pub fn compute_z(job: &Job) -> Vec<Entry> {
    let n = job.ncut_or(5);
    let xs = job.points.clone().unwrap_or_default();
    let r = partfun::z5d_numeric(&job.params, 0, &xs, n).map(|z| {
        Entry::new(
            "Z",
            format!("Q^0..Q^{n}"),
            true,
            json!({ "insertions": xs.iter().map(rat_json).collect::<Vec<_>>(), "coefficients": series_json(&z) }),
        )
    });
    one(r, "Z", "")
}

pub fn entries(job: &Job) -> Vec<Entry> {
    match job.check {
        Check::VerifyMacmahon => macmahon(job),
        Check::VerifyFock => fock_checks(job),
        Check::VerifyZCrosscheck => crosschecks(job),
        Check::VerifyQcurve => qcurve_checks(job),
        Check::VerifyKacSchwarz => kac_schwarz(job),
        Check::Verify4dCurve => curve_4d(job),
        Check::VerifyLimits => limits(job),
        Check::VerifyFay => fay(job),
        Check::VerifyFay4d => fay_4d(job),
        Check::ComputeZ => compute_z(job),
        Check::Suite => Check::SUITE
            .iter()
            .flat_map(|&c| {
                // The suite always runs at the default windows.
                let sub = Job { check: c, ncut: None, points: None, ..job.clone() };
                entries(&sub)
            })
            .collect(),
    }
}

pub fn run(job: &Job, with_profile: bool) -> Report {
    profile::enable(with_profile);
    profile::reset();
    let start = Instant::now();
    let entries = entries(job);
    let wall = start.elapsed().as_secs_f64();
    let profile = with_profile.then(|| {
        let snap = profile::snapshot();
        json!(snap.into_iter().map(|(k, s)| (k.to_string(), json!(s))).collect::<serde_json::Map<_, _>>())
    });
    profile::enable(false);
    Report { tool: "mcqc", version: env!("CARGO_PKG_VERSION"), job: job.echo(), entries, wall_time_s: wall, profile }
}

/// One line per entry.
pub fn summary(report: &Report) -> String {
    let mut s = String::new();
    for e in &report.entries {
        let tag = match e.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Untrusted => "UNTRUSTED",
        };
        s.push_str(&format!("{tag:9} {} [{}]\n", e.name, e.window));
    }
    s.push_str(&format!("{} entries, {:.2} s\n", report.entries.len(), report.wall_time_s));
    s
}
