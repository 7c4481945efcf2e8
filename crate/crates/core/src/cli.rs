//! The `cohiggs` command-line front end.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input (including bad
//! numbers, reported with their position), 2 a bundle that fails validation
//! or a verification check that fails, 3 a Nahm trajectory that hits a pole.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bfield::{
    apply_exact_bfield, commutator_obstruction, gauge_equivalence_check, lb_transition, random_theta, transformed_dbar,
    DolbeaultB,
};
use crate::bundle::{canonical_o_plus_t, random_trivial_bundle, CoHiggsBundleP1, Violation};
use crate::cohomology::{hypercohomology, theorem_check, TheoremStatus};
use crate::exactalg::{GaussQ, MultiPoly, MultiPolyMatrix, UniPoly, Var};
use crate::nahm::{
    lax_consistency_oracle, pole_solution, random_state, spectral_distance, trace_drift, Integrator, NahmError,
    NahmState, DEFAULT_DT,
};
use crate::spectral::{char_poly, Genus, Irreducibility, Smoothness, ZeroSectionIntersection};
use crate::stability::{decide, slope, stable_by_spectral};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Spectral,
    Cohomology,
    Stability,
    BfieldCheck,
    Nahm,
    DemoFixtures,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Spectral => "spectral",
            Command::Cohomology => "cohomology",
            Command::Stability => "stability",
            Command::BfieldCheck => "bfield-check",
            Command::Nahm => "nahm",
            Command::DemoFixtures => "demo-fixtures",
        }
    }
}

/// Analyses of co-Higgs bundles on the projective line.
#[derive(Debug, Parser)]
#[command(name = "cohiggs", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Input JSON (bundle, or Nahm data for `nahm`).
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Report destination; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output directory for `demo-fixtures`.
    #[arg(long, value_name = "DIR")]
    dir: Option<PathBuf>,
    /// RK4 step size.
    #[arg(long)]
    dt: Option<f64>,
    /// Integration time for `nahm`.
    #[arg(long = "t")]
    t_end: Option<f64>,
    /// Number of sample points for spectral comparisons.
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for generated data.
    #[arg(long)]
    seed: Option<u64>,
    /// Coefficient bound for generated data.
    #[arg(long)]
    height: Option<u64>,
    /// theta JSON for `bfield-check`; a seeded random one is used otherwise.
    #[arg(long, value_name = "PATH")]
    theta: Option<PathBuf>,
    /// JSON-lines trajectory export for `nahm`.
    #[arg(long, value_name = "PATH")]
    trajectory: Option<PathBuf>,
    /// Record every n-th step in the trajectory.
    #[arg(long)]
    every: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub dir: Option<PathBuf>,
    pub dt: f64,
    pub t_end: f64,
    pub samples: usize,
    pub seed: u64,
    pub height: u64,
    pub theta: Option<PathBuf>,
    pub trajectory: Option<PathBuf>,
    pub every: usize,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            output: None,
            dir: None,
            dt: DEFAULT_DT,
            t_end: 1.0,
            samples: 5,
            seed: 1,
            height: 3,
            theta: None,
            trajectory: None,
            every: 100,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

impl TryFrom<Args> for RunConfig {
    type Error = CliError;

    fn try_from(a: Args) -> Result<Self, CliError> {
        use Command::*;
        let cmd = a.command;
        let given: [(&str, bool, &[Command]); 10] = [
            ("--in", a.input.is_some(), &[Validate, Spectral, Cohomology, Stability, BfieldCheck, Nahm]),
            ("--out", a.out.is_some(), &[Validate, Spectral, Cohomology, Stability, BfieldCheck, Nahm]),
            ("--dir", a.dir.is_some(), &[DemoFixtures]),
            ("--dt", a.dt.is_some(), &[Nahm]),
            ("--t", a.t_end.is_some(), &[Nahm]),
            ("--samples", a.samples.is_some(), &[Nahm]),
            ("--seed", a.seed.is_some(), &[BfieldCheck, DemoFixtures]),
            ("--height", a.height.is_some(), &[BfieldCheck, DemoFixtures]),
            ("--theta", a.theta.is_some(), &[BfieldCheck]),
            ("--trajectory", a.trajectory.is_some() || a.every.is_some(), &[Nahm]),
        ];
        for (flag, present, allowed) in given {
            if present && !allowed.contains(&cmd) {
                return Err(CliError::Usage(format!("{flag} does not apply to {}", cmd.name())));
            }
        }
        if cmd == DemoFixtures && a.dir.is_none() {
            return Err(CliError::Usage("demo-fixtures needs --dir".into()));
        }
        if cmd != DemoFixtures && a.input.is_none() {
            return Err(CliError::Usage(format!("{} needs --in", cmd.name())));
        }
        let mut cfg = RunConfig::new(cmd);
        if let Some(dt) = a.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(CliError::Usage(format!("--dt must be positive, got {dt}")));
            }
            cfg.dt = dt;
        }
        if let Some(t) = a.t_end {
            if !t.is_finite() {
                return Err(CliError::Usage("--t must be finite".into()));
            }
            cfg.t_end = t;
        }
        if let Some(n) = a.samples {
            if n == 0 {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            cfg.samples = n;
        }
        if let Some(n) = a.every {
            if n == 0 {
                return Err(CliError::Usage("--every must be at least 1".into()));
            }
            cfg.every = n;
        }
        cfg.seed = a.seed.unwrap_or(cfg.seed);
        cfg.height = a.height.unwrap_or(cfg.height);
        cfg.input = a.input;
        cfg.output = a.out;
        cfg.dir = a.dir;
        cfg.theta = a.theta;
        cfg.trajectory = a.trajectory;
        Ok(cfg)
    }
}

/// Exit code and the JSON report (empty for `demo-fixtures`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub code: i32,
    pub report: String,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse { path: path.to_path_buf(), message: e.to_string() })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

/// A named verification outcome inside a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub details: String,
}

impl Check {
    fn new(name: &str, ok: Option<bool>, details: String) -> Self {
        let status = match ok {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "skipped",
        };
        Check { name: name.into(), status: status.into(), details }
    }

    fn failed(&self) -> bool {
        self.status == "fail"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationEntry {
    pub row: usize,
    pub col: usize,
    pub degree: i64,
    pub bound: i64,
}

impl From<&Violation> for ViolationEntry {
    fn from(v: &Violation) -> Self {
        ViolationEntry { row: v.row, col: v.col, degree: v.degree, bound: v.bound }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub command: String,
    pub valid: bool,
    pub rank: usize,
    pub degrees: Vec<i64>,
    pub violations: Vec<ViolationEntry>,
}

pub fn validate_report(b: &CoHiggsBundleP1) -> ValidateReport {
    let v = b.validate();
    ValidateReport {
        command: "validate".into(),
        valid: v.valid,
        rank: b.rank(),
        degrees: b.degrees().to_vec(),
        violations: v.violations.iter().map(ViolationEntry::from).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSectionReport {
    pub degenerate: bool,
    pub transversal: bool,
    pub total_multiplicity: usize,
    pub distinct_points: usize,
    pub infinity_multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub command: String,
    pub k: usize,
    pub coefficients: Vec<UniPoly>,
    pub polynomial: String,
    pub reduced: bool,
    /// `smooth`, `singular`, `undetermined`, or `not_reduced`.
    pub smoothness: String,
    pub singular_point: Option<[String; 3]>,
    /// `true`, `false`, `unknown`, or `not_reduced`.
    pub irreducible: String,
    /// Genus when certified smooth, otherwise `null`.
    pub genus: Option<u64>,
    pub zero_section: ZeroSectionReport,
    pub checks: Vec<Check>,
}

/// Panics if `b` fails validation.
pub fn spectral_report(b: &CoHiggsBundleP1) -> SpectralReport {
    let c = char_poly(b).expect("validated by caller");
    let k = c.rank();
    let reduced = c.is_reduced();
    let smooth = if reduced { c.smoothness().ok() } else { None };
    let (smoothness, singular_point) = match &smooth {
        None => ("not_reduced".to_string(), None),
        Some(Smoothness::Singular(p)) => (
            "singular".to_string(),
            Some([format!("{:?}", p.chart).to_lowercase(), p.base.to_string(), p.fibre.to_string()]),
        ),
        Some(s) => (s.label().to_string(), None),
    };
    let irreducible = match c.is_irreducible() {
        Ok(Irreducibility::True) => "true",
        Ok(Irreducibility::False) => "false",
        Ok(Irreducibility::Unknown) => "unknown",
        Err(_) => "not_reduced",
    };
    let genus = match c.genus() {
        Ok(Genus::Value(g)) => Some(g),
        _ => None,
    };
    let expected = ((k - 1) * (k - 1)) as u64;
    let genus_check = Check::new(
        "genus_law",
        genus.map(|g| g == expected),
        match genus {
            Some(g) => format!("genus {g}, expected (k-1)^2 = {expected}"),
            None => "curve not certified smooth".into(),
        },
    );
    let zero_section = match c.zero_section_intersection() {
        ZeroSectionIntersection::Degenerate => ZeroSectionReport {
            degenerate: true,
            transversal: false,
            total_multiplicity: 2 * k,
            distinct_points: 0,
            infinity_multiplicity: 0,
        },
        ZeroSectionIntersection::Points(p) => ZeroSectionReport {
            degenerate: false,
            transversal: p.transversal,
            total_multiplicity: p.total_multiplicity,
            distinct_points: p.distinct_points,
            infinity_multiplicity: p.infinity_multiplicity,
        },
    };
    SpectralReport {
        command: "spectral".into(),
        k,
        coefficients: c.coefficients().to_vec(),
        polynomial: c.polynomial().display_in("z", "y"),
        reduced,
        smoothness,
        singular_point,
        irreducible: irreducible.into(),
        genus,
        zero_section,
        checks: vec![genus_check],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyCliReport {
    pub command: String,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub index: i64,
    /// A count, or the string `NA` when the intersection is not transversal.
    pub zero_locus_dim: serde_json::Value,
    pub theorem: String,
    pub theorem_details: String,
    pub checks: Vec<Check>,
}

/// Panics if `b` fails validation.
pub fn cohomology_report(b: &CoHiggsBundleP1) -> CohomologyCliReport {
    let r = hypercohomology(b).expect("validated by caller");
    let t = theorem_check(b);
    let k = b.rank() as i64;
    let theorem = serde_json::to_value(t.status).expect("enum").as_str().unwrap_or_default().to_string();
    let checks = vec![
        Check::new(
            "vanishing_theorem",
            match t.status {
                TheoremStatus::Pass => Some(true),
                TheoremStatus::Fail => Some(false),
                TheoremStatus::Skipped => None,
            },
            t.details.clone(),
        ),
        Check::new("index_formula", Some(r.index == -2 * k), format!("index {}, expected -2k = {}", r.index, -2 * k)),
    ];
    CohomologyCliReport {
        command: "cohomology".into(),
        h0: r.h0,
        h1: r.h1,
        h2: r.h2,
        index: r.index,
        zero_locus_dim: serde_json::to_value(r.zero_locus_dim).expect("serializable"),
        theorem,
        theorem_details: t.details,
        checks,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub lambda: UniPoly,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityCliReport {
    pub command: String,
    pub status: String,
    pub witnesses: Vec<WitnessEntry>,
    pub slope: String,
    pub stable_by_spectral: bool,
}

/// Panics if `b` fails validation.
pub fn stability_report(b: &CoHiggsBundleP1) -> StabilityCliReport {
    let v = decide(b).expect("validated by caller");
    StabilityCliReport {
        command: "stability".into(),
        status: serde_json::to_value(v.status).expect("enum").as_str().unwrap_or_default().to_string(),
        witnesses: v.witnesses.into_iter().map(|w| WitnessEntry { lambda: w.lambda, degree: w.degree }).collect(),
        slope: slope(b).to_string(),
        stable_by_spectral: stable_by_spectral(b),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BFieldCliReport {
    pub command: String,
    pub theta: DolbeaultB,
    pub gauge_residual_terms: usize,
    pub exponential_series_checked: bool,
    /// `(df/dzb) phi`, entries as polynomials in `z1, zb1`. Empty for a
    /// two-variable theta.
    pub transformed_dbar: Vec<Vec<String>>,
    pub phi_unchanged: bool,
    /// Two-variable theta only: `phi^1 = phi(z1)`, `phi^2 = phi(z2)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_model: Option<LocalModelEntry>,
    pub lb_transition: String,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalModelEntry {
    pub phis_commute: bool,
    pub obstruction_terms: usize,
}

fn term_count(ms: &[MultiPolyMatrix]) -> usize {
    ms.iter().flat_map(|m| m.entries().map(|(_, _, p)| p.num_terms())).sum()
}

pub fn bfield_report(b: &CoHiggsBundleP1, theta: DolbeaultB) -> Result<BFieldCliReport, CliError> {
    let usage = |e: crate::bfield::BFieldError| CliError::Usage(e.to_string());
    if theta.vars() == 2 {
        let phis: Vec<MultiPolyMatrix> =
            [Var::Z1, Var::Z2].iter().map(|&v| b.phi().map(|p| MultiPoly::from_unipoly(p, v))).collect();
        let commute = phis[0].commutator(&phis[1]).expect("square").is_zero();
        let obstruction = commutator_obstruction(&phis, &theta).map_err(usage)?;
        let terms = term_count(&obstruction);
        let details = format!("{terms} nonzero obstruction terms; phi(z1) and phi(z2) commute: {commute}");
        return Ok(BFieldCliReport {
            command: "bfield-check".into(),
            theta,
            gauge_residual_terms: terms,
            exponential_series_checked: false,
            transformed_dbar: Vec::new(),
            phi_unchanged: true,
            local_model: Some(LocalModelEntry { phis_commute: commute, obstruction_terms: terms }),
            lb_transition: lb_transition(GaussQ::from_int(1)).to_string(),
            checks: vec![Check::new("commutator_obstruction", Some(terms == 0), details)],
        });
    }
    let gauge = gauge_equivalence_check(b, &theta).map_err(usage)?;
    let td = transformed_dbar(b, &theta).map_err(usage)?;
    let mut checks = vec![Check::new(
        "gauge_equivalence",
        Some(gauge.passed),
        format!("{} nonzero residual terms", gauge.residual_terms()),
    )];
    match apply_exact_bfield(b, &theta) {
        Ok(nb) => {
            let same_h = hypercohomology(&nb).ok() == hypercohomology(b).ok();
            let same_s = decide(&nb).ok() == decide(b).ok();
            let same_c = char_poly(&nb).ok() == char_poly(b).ok();
            checks.push(Check::new("hypercohomology_invariant", Some(same_h), String::new()));
            checks.push(Check::new("stability_invariant", Some(same_s), String::new()));
            checks.push(Check::new("spectral_curve_invariant", Some(same_c), String::new()));
        }
        Err(e) => checks.push(Check::new("invariants", Some(false), e.to_string())),
    }
    Ok(BFieldCliReport {
        command: "bfield-check".into(),
        theta,
        gauge_residual_terms: gauge.residual_terms(),
        exponential_series_checked: gauge.series_defect.is_some(),
        transformed_dbar: td.term.to_rows().iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect(),
        phi_unchanged: td.phi == *b.phi(),
        local_model: None,
        lb_transition: lb_transition(GaussQ::from_int(1)).to_string(),
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NahmReport {
    pub command: String,
    pub k: usize,
    pub t_end: f64,
    pub dt: f64,
    pub samples: usize,
    pub final_state: NahmState,
    pub isospectral_drift: f64,
    pub trace_drift: f64,
    pub lax_flow_agreement: f64,
    pub lax_sign: i32,
    pub lax_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NahmFailure {
    pub command: String,
    pub error: String,
    pub t: f64,
}

fn nahm_run(cfg: &RunConfig, s0: &NahmState) -> Result<RunOutcome, CliError> {
    let integ = Integrator::with_dt(cfg.dt);
    let every = if cfg.trajectory.is_some() { cfg.every } else { 0 };
    let result = integ
        .trajectory(s0, cfg.t_end, every)
        .and_then(|(end, rec)| Ok((end.clone(), rec, integ.lax_flow(s0, cfg.t_end)?)));
    let (end, rec, lax_end) = match result {
        Ok(v) => v,
        Err(NahmError::PoleEncountered { t }) => {
            let f = NahmFailure { command: "nahm".into(), error: "pole_encountered".into(), t };
            return Ok(RunOutcome { code: EXIT_NUMERIC, report: to_json(&f) });
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    if let Some(path) = &cfg.trajectory {
        let mut out = String::new();
        for s in &rec {
            let mut v = serde_json::to_value(s).expect("state serializes");
            v["drift"] = serde_json::json!(spectral_distance(s0, s, cfg.samples));
            out.push_str(&serde_json::to_string(&v).expect("value"));
            out.push('\n');
        }
        fs::write(path, out).map_err(io_err(path))?;
    }
    let oracle = lax_consistency_oracle(s0.rank().max(2), cfg.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = NahmReport {
        command: "nahm".into(),
        k: s0.rank(),
        t_end: cfg.t_end,
        dt: cfg.dt,
        samples: cfg.samples,
        isospectral_drift: spectral_distance(s0, &end, cfg.samples),
        trace_drift: trace_drift(s0, &end, cfg.samples),
        lax_flow_agreement: end.distance(&lax_end),
        lax_sign: oracle.sign,
        lax_residual: oracle.residual,
        final_state: end,
    };
    Ok(RunOutcome { code: EXIT_OK, report: to_json(&report) })
}

/// `(file name, contents)` of every demo fixture, generated from fixed data
/// and the given seed and height.
pub fn demo_fixtures(seed: u64, height: u64) -> Vec<(String, String)> {
    let bundle = |d: Vec<i64>, e: &[&[&[i64]]]| CoHiggsBundleP1::from_int_entries(d, e).expect("fixture shape");
    let mut out: Vec<(String, String)> = vec![
        ("o_plus_t.json".into(), to_json(&canonical_o_plus_t())),
        ("generic_rank2.json".into(), to_json(&random_trivial_bundle(2, seed, height))),
        ("generic_rank3.json".into(), to_json(&random_trivial_bundle(3, seed, height))),
        ("rank1_d0_quadratic.json".into(), to_json(&bundle(vec![0], &[&[&[-1, 0, 1]]]))),
        ("rank1_dm2_linear.json".into(), to_json(&bundle(vec![-2], &[&[&[0, 1]]]))),
        ("rank1_dm4_constant.json".into(), to_json(&bundle(vec![-4], &[&[&[1]]]))),
        ("stable_rank2.json".into(), to_json(&bundle(vec![0, 0], &[&[&[], &[1, 0, 1]], &[&[-1, 0, 1], &[]]]))),
        ("semistable_rank2.json".into(), to_json(&bundle(vec![0, 0], &[&[&[0, 0, 1], &[]], &[&[], &[]]]))),
        ("unstable_rank2.json".into(), to_json(&bundle(vec![1, -1], &[&[&[1], &[1, 2, 0, 1, 1]], &[&[], &[2]]]))),
        ("non_transversal_rank2.json".into(), to_json(&bundle(vec![0, 0], &[&[&[], &[1]], &[&[0, 0, 1], &[]]]))),
        ("nahm_pole.json".into(), to_json(&pole_solution(2, 2.0, 0.0))),
        ("k2.json".into(), to_json(&random_state(2, seed))),
        ("k3.json".into(), to_json(&random_state(3, seed))),
        ("theta_one_var.json".into(), to_json(&random_theta(1, seed, height))),
        ("theta_two_var.json".into(), to_json(&random_theta(2, seed, height))),
    ];
    out.sort();
    out
}

/// Runs one command. `Err` is reserved for exit code 1.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    if cfg.command == Command::DemoFixtures {
        let dir = cfg.dir.as_deref().ok_or_else(|| CliError::Usage("demo-fixtures needs --dir".into()))?;
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        for (name, text) in demo_fixtures(cfg.seed, cfg.height) {
            let p = dir.join(name);
            fs::write(&p, text).map_err(io_err(&p))?;
        }
        return Ok(RunOutcome { code: EXIT_OK, report: String::new() });
    }
    let input = cfg.input.as_deref().ok_or_else(|| CliError::Usage("missing --in".into()))?;
    if cfg.command == Command::Nahm {
        let s0: NahmState = read_json(input)?;
        return nahm_run(cfg, &s0);
    }
    let b: CoHiggsBundleP1 = read_json(input)?;
    if !b.is_valid() || cfg.command == Command::Validate {
        let r = validate_report(&b);
        return Ok(RunOutcome { code: if r.valid { EXIT_OK } else { EXIT_INVALID }, report: to_json(&r) });
    }
    let (report, checks) = match cfg.command {
        Command::Spectral => {
            let r = spectral_report(&b);
            (to_json(&r), r.checks)
        }
        Command::Cohomology => {
            let r = cohomology_report(&b);
            (to_json(&r), r.checks)
        }
        Command::Stability => (to_json(&stability_report(&b)), Vec::new()),
        Command::BfieldCheck => {
            let theta = match &cfg.theta {
                Some(p) => read_json(p)?,
                None => random_theta(1, cfg.seed, cfg.height),
            };
            let r = bfield_report(&b, theta)?;
            (to_json(&r), r.checks)
        }
        Command::Validate | Command::Nahm | Command::DemoFixtures => unreachable!("handled above"),
    };
    let code = if checks.iter().any(Check::failed) { EXIT_INVALID } else { EXIT_OK };
    Ok(RunOutcome { code, report })
}

/// Parses arguments, runs, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    let outcome = RunConfig::try_from(args).and_then(|cfg| {
        let out = run(&cfg)?;
        match &cfg.output {
            Some(p) => fs::write(p, &out.report).map_err(io_err(p))?,
            None => {
                let _ = std::io::stdout().write_all(out.report.as_bytes());
            }
        }
        Ok(out.code)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_PARSE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let a = Args::try_parse_from(std::iter::once("cohiggs").chain(args.iter().copied()))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        RunConfig::try_from(a)
    }

    #[test]
    fn flags_are_checked_per_command() {
        let c = parse(&["nahm", "--in", "k2.json", "--dt", "1e-2", "--t", "0.5"]).unwrap();
        assert_eq!((c.dt, c.t_end, c.samples), (1e-2, 0.5, 5));
        assert!(parse(&["cohomology", "--in", "a.json", "--dt", "1e-3"]).is_err());
        assert!(parse(&["cohomology"]).is_err());
        assert!(parse(&["nahm", "--in", "a.json", "--dt", "-1"]).is_err());
        assert!(parse(&["demo-fixtures"]).is_err());
        assert_eq!(parse(&["bfield-check", "--in", "a", "--seed", "9"]).unwrap().seed, 9);
        assert!(parse(&["frobnicate"]).is_err());
    }

    #[test]
    fn fixtures_are_deterministic_and_valid() {
        let a = demo_fixtures(1, 3);
        assert_eq!(a, demo_fixtures(1, 3));
        for (name, text) in &a {
            if name.starts_with("nahm") || name.starts_with('k') || name.starts_with("theta") {
                continue;
            }
            let b: CoHiggsBundleP1 = serde_json::from_str(text).unwrap();
            assert!(b.is_valid(), "{name}");
        }
        let o: CoHiggsBundleP1 =
            serde_json::from_str(&a.iter().find(|(n, _)| n == "o_plus_t.json").unwrap().1).unwrap();
        assert_eq!(o.degrees(), &[0, 2]);
    }
}
