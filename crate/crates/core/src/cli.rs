//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a residual above tolerance (or a failed
//! validation), 2 evaluation error, 3 bad input.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::{AlgebraId, build_root_system};
use crate::dynamical::{
    CheckFailure, DynOptions, DynParam, DynReport, Method, TruncationPolicy, Twist,
    convergence_margin, dynamic_checks, r_dyn,
};
use crate::error::Error;
use crate::io::{InputError, ledger_hash, read_rep, write_json, write_matrix};
use crate::linalg::{diag, max_abs, rel_residual};
use crate::repspace::{
    RepReport, Representation, b2_vector_rep, osp12_rep, spin_rep_sl2, trivial_rep, validate_rep,
    vector_rep_sln,
};
use crate::rmat::{RData, StaticReport, full_r, k_matrix, rhat, static_checks};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_EVAL: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qdyn",
    version,
    about = "R-matrices and dynamical twists for U_q(g)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write R̂, K, R, B, F and R(μ) for two representations.
    Compute(CommonArgs),
    /// Run the static and dynamical residual suites on three representations.
    Verify(CommonArgs),
    /// Evaluate margins, truncation lengths and residuals over a parameter grid.
    Sweep(CommonArgs),
    /// Check the defining relations of one or more representations.
    ValidateRep(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// A1, A2, A3, B2 or OSP12 (aliases sl2, sl3, sl4, so5, osp12).
    #[arg(long, default_value = "A1")]
    pub algebra: String,
    /// Comma-separated: spin:J, vector, osp3, trivial, file:PATH.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub reps: Vec<String>,
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    /// Pairings (μ|α_i); a single value is used for every i.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub mu: Vec<f64>,
    /// product, linear or both.
    #[arg(long, default_value = "both")]
    pub method: String,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_terms: usize,
    #[arg(long, default_value_t = 1e-15)]
    pub stop_tol: f64,
    /// Index of the shipped normal ordering.
    #[arg(long, default_value_t = 0)]
    pub ordering: usize,
    /// Output directory (compute) or report file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// e.g. `mu=2:12:0.5;q=0.3,0.5`.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RepSpec {
    Spin(f64),
    Vector,
    Osp3,
    Trivial,
    File(PathBuf),
}

impl RepSpec {
    pub fn parse(s: &str) -> Result<Self, InputError> {
        let s = s.trim();
        if let Some(j) = s.strip_prefix("spin:") {
            let j: f64 = j
                .parse()
                .map_err(|_| InputError::Usage(format!("bad spin in `{s}`")))?;
            return Ok(RepSpec::Spin(j));
        }
        if let Some(p) = s.strip_prefix("file:") {
            return Ok(RepSpec::File(PathBuf::from(p)));
        }
        match s {
            "vector" => Ok(RepSpec::Vector),
            "osp3" => Ok(RepSpec::Osp3),
            "trivial" => Ok(RepSpec::Trivial),
            _ => Err(InputError::Usage(format!("unknown representation `{s}`"))),
        }
    }

    /// Build the module; ingested files are validated before use when `check` is set.
    pub fn build(&self, id: AlgebraId, q: f64, check: bool) -> Result<Representation, InputError> {
        let need = |want: AlgebraId| {
            if id == want {
                Ok(())
            } else {
                Err(InputError::Core(Error::AlgebraMismatch(
                    id.to_string(),
                    want.to_string(),
                )))
            }
        };
        let rep = match self {
            RepSpec::Spin(j) => {
                need(AlgebraId::A1)?;
                spin_rep_sl2(*j, q)?
            }
            RepSpec::Vector => match id {
                AlgebraId::A1 => vector_rep_sln(2, q)?,
                AlgebraId::A2 => vector_rep_sln(3, q)?,
                AlgebraId::A3 => vector_rep_sln(4, q)?,
                AlgebraId::B2 => b2_vector_rep(q),
                AlgebraId::Osp12 => {
                    return Err(InputError::Usage("OSP12 has no `vector`; use osp3".into()));
                }
            },
            RepSpec::Osp3 => {
                need(AlgebraId::Osp12)?;
                osp12_rep(q)
            }
            RepSpec::Trivial => trivial_rep(id, q),
            RepSpec::File(p) => {
                let rep = read_rep(p)?;
                need(rep.rs.algebra)?;
                if rep.q != q {
                    return Err(InputError::Format(format!(
                        "{} has q = {}, run uses q = {q}",
                        p.display(),
                        rep.q
                    )));
                }
                if check {
                    let report = validate_rep(&rep, 1e-9);
                    if !report.pass {
                        return Err(InputError::Format(format!(
                            "{} fails relations {:?}",
                            p.display(),
                            report.failed
                        )));
                    }
                }
                rep
            }
        };
        Ok(rep)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MethodSel {
    One(Method),
    Both,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algebra: AlgebraId,
    pub specs: Vec<RepSpec>,
    pub labels: Vec<String>,
    pub q: f64,
    pub mu: Vec<f64>,
    method: MethodSel,
    pub tol: f64,
    pub pol: TruncationPolicy,
    pub ordering: usize,
    pub out: Option<PathBuf>,
    pub grid: Option<String>,
}

impl RunConfig {
    fn from_args(a: &CommonArgs, arity: Option<(usize, usize)>) -> Result<Self, InputError> {
        let bad = |m: String| Err(InputError::Usage(m));
        let algebra: AlgebraId = a.algebra.parse()?;
        if !(a.q > 0.0 && a.q < 1.0) {
            return bad(format!("q = {} must lie in (0, 1)", a.q));
        }
        if !(a.tol > 0.0) || !(a.stop_tol > 0.0) || a.max_terms == 0 {
            return bad("tolerances and max-terms must be positive".into());
        }
        if let Some((lo, hi)) = arity
            && (a.reps.len() < lo || a.reps.len() > hi)
        {
            return bad(format!(
                "expected {lo}..={hi} representations, got {}",
                a.reps.len()
            ));
        }
        let specs = a
            .reps
            .iter()
            .map(|s| RepSpec::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let rank = algebra.rank();
        let mu = match a.mu.len() {
            0 => vec![8.37; rank],
            1 => vec![a.mu[0]; rank],
            n if n == rank => a.mu.clone(),
            n => return bad(format!("{algebra} has rank {rank}, got {n} values of mu")),
        };
        if mu.iter().any(|m| !m.is_finite()) {
            return bad("mu must be finite".into());
        }
        let method = match a.method.as_str() {
            "both" => MethodSel::Both,
            m => MethodSel::One(m.parse().map_err(InputError::Usage)?),
        };
        let rs = build_root_system(algebra);
        rs.ordering(a.ordering)?;
        Ok(RunConfig {
            algebra,
            labels: a.reps.clone(),
            specs,
            q: a.q,
            mu,
            method,
            tol: a.tol,
            pol: TruncationPolicy {
                max_terms: a.max_terms,
                stop_tol: a.stop_tol,
                ..Default::default()
            },
            ordering: a.ordering,
            out: a.out.clone(),
            grid: a.grid.clone(),
        })
    }

    fn reps_at(&self, q: f64, check: bool) -> Result<Vec<Representation>, InputError> {
        self.specs
            .iter()
            .map(|s| s.build(self.algebra, q, check))
            .collect()
    }

    fn method_name(&self) -> String {
        match self.method {
            MethodSel::Both => "both".into(),
            MethodSel::One(m) => m.to_string(),
        }
    }

    fn dyn_method(&self) -> Method {
        match self.method {
            MethodSel::One(m) => m,
            MethodSel::Both => Method::Product,
        }
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            algebra: self.algebra.to_string(),
            reps: self.labels.clone(),
            q: self.q,
            mu: self.mu.clone(),
            x: self.mu.iter().map(|m| self.q.powf(-m / 2.0)).collect(),
            method: self.method_name(),
            tol: self.tol,
            truncation: self.pol,
            ordering: self.ordering,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct ConfigEcho {
    pub algebra: String,
    pub reps: Vec<String>,
    pub q: f64,
    pub mu: Vec<f64>,
    /// `x_i = q^{−μ_i/2}`, for display only.
    pub x: Vec<f64>,
    pub method: String,
    pub tol: f64,
    pub truncation: TruncationPolicy,
    pub ordering: usize,
}

#[derive(Serialize, Debug)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub ledger_hash: String,
    pub timestamp: u64,
    pub config: ConfigEcho,
    pub result: T,
}

fn report<T: Serialize>(command: &'static str, cfg: &RunConfig, result: T) -> Report<T> {
    Report {
        tool: "qdyn",
        version: env!("CARGO_PKG_VERSION"),
        command,
        ledger_hash: ledger_hash(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        config: cfg.echo(),
        result,
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ErrorEcho {
    pub check: String,
    pub kind: String,
    pub message: String,
}

impl From<&CheckFailure> for ErrorEcho {
    fn from(f: &CheckFailure) -> Self {
        ErrorEcho {
            check: f.check.into(),
            kind: f.error.kind().into(),
            message: f.error.to_string(),
        }
    }
}

#[derive(Serialize, Debug)]
pub struct VerifyResult {
    pub static_checks: Option<StaticReport>,
    pub dynamic_checks: Option<DynReport>,
    pub error: Option<ErrorEcho>,
    pub pass: bool,
}

#[derive(Serialize, Debug, Clone)]
pub struct SweepRow {
    pub q: f64,
    pub mu: Vec<f64>,
    pub margin: f64,
    pub terms: Option<usize>,
    pub tail: Option<f64>,
    pub linear_eq: Option<f64>,
    pub product_vs_linear: Option<f64>,
    pub dynamic: Option<DynReport>,
    pub error: Option<ErrorEcho>,
}

fn eprint_input(e: &InputError) -> i32 {
    eprintln!("error: {e}");
    EXIT_INPUT
}

fn write_or_print<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), InputError> {
    match out {
        Some(p) => write_json(p, value),
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(value).expect("report serializes")
            );
            Ok(())
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match &cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::ValidateRep(a) => cmd_validate_rep(a),
    }
}

fn rdata(rep: &Representation, index: usize) -> Result<RData, InputError> {
    Ok(RData::for_rep(rep, index)?)
}

pub fn cmd_compute(a: &CommonArgs) -> i32 {
    let cfg = match RunConfig::from_args(a, Some((2, 2))) {
        Ok(c) => c,
        Err(e) => return eprint_input(&e),
    };
    let reps = match cfg.reps_at(cfg.q, true) {
        Ok(r) => r,
        Err(e) => return eprint_input(&e),
    };
    let (r1, r2) = (&reps[0], &reps[1]);
    let data = match rdata(r1, cfg.ordering) {
        Ok(d) => d,
        Err(e) => return eprint_input(&e),
    };
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    if let Err(e) = std::fs::create_dir_all(&out) {
        return eprint_input(&InputError::Io(out.display().to_string(), e));
    }
    let mu = DynParam::new(&cfg.mu, cfg.q);

    let mut objects = Vec::new();
    let eval = (|| -> Result<(), Error> {
        objects.push(("rhat", rhat(r1, r2, &data)?));
        objects.push(("k", k_matrix(r1, r2)?));
        objects.push(("r", full_r(r1, r2, &data)?));
        let tw = Twist::new(r1, r2, &data)?;
        objects.push(("b", tw.b2(&mu)));
        let methods = match cfg.method {
            MethodSel::Both => vec![Method::Product, Method::Linear],
            MethodSel::One(m) => vec![m],
        };
        for m in &methods {
            let f = tw.eval(&mu, *m, &cfg.pol)?;
            objects.push((
                if *m == Method::Product {
                    "f_product"
                } else {
                    "f_linear"
                },
                f,
            ));
        }
        objects.push(("r_dyn", r_dyn(r1, r2, &data, &mu, methods[0], &cfg.pol)?));
        Ok(())
    })();
    if let Err(e) = eval {
        eprintln!("evaluation error: {}: {e}", e.kind());
        return if e.is_evaluation() {
            EXIT_EVAL
        } else {
            EXIT_INPUT
        };
    }
    for (name, m) in &objects {
        let path = out.join(format!("{name}.json"));
        if let Err(e) = write_matrix(&path, name, m) {
            return eprint_input(&e);
        }
        println!(
            "{name:10} {}x{}  max|entry| = {:.6e}",
            m.nrows(),
            m.ncols(),
            max_abs(m)
        );
    }
    EXIT_OK
}

pub fn cmd_verify(a: &CommonArgs) -> i32 {
    let cfg = match RunConfig::from_args(a, Some((3, 3))) {
        Ok(c) => c,
        Err(e) => return eprint_input(&e),
    };
    let reps = match cfg.reps_at(cfg.q, true) {
        Ok(r) => r,
        Err(e) => return eprint_input(&e),
    };
    let data = match rdata(&reps[0], cfg.ordering) {
        Ok(d) => d,
        Err(e) => return eprint_input(&e),
    };
    let other = if reps[0].rs.orderings.len() > 1 {
        1 - cfg.ordering.min(1)
    } else {
        0
    };
    let data2 = match rdata(&reps[0], other) {
        Ok(d) => d,
        Err(e) => return eprint_input(&e),
    };
    let trip = [&reps[0], &reps[1], &reps[2]];
    let mu = DynParam::new(&cfg.mu, cfg.q);
    let opts = DynOptions {
        pol: cfg.pol,
        method: cfg.dyn_method(),
        tol: cfg.tol,
    };

    let mut result = VerifyResult {
        static_checks: None,
        dynamic_checks: None,
        error: None,
        pass: false,
    };
    match static_checks(trip[0], trip[1], trip[2], &data, &data2, cfg.tol) {
        Ok(s) => result.static_checks = Some(s),
        Err(e) => {
            result.error = Some(ErrorEcho {
                check: "static".into(),
                kind: e.kind().into(),
                message: e.to_string(),
            })
        }
    }
    if result.error.is_none() {
        match dynamic_checks(trip, &data, &mu, &opts) {
            Ok(d) => result.dynamic_checks = Some(d),
            Err(f) => result.error = Some(ErrorEcho::from(&f)),
        }
    }
    result.pass = result.error.is_none()
        && result.static_checks.as_ref().is_some_and(|s| s.pass)
        && result.dynamic_checks.as_ref().is_some_and(|d| d.pass);
    let code = match &result.error {
        Some(e) => {
            eprintln!("evaluation error in {}: {}: {}", e.check, e.kind, e.message);
            EXIT_EVAL
        }
        None if result.pass => EXIT_OK,
        None => EXIT_FAIL,
    };
    if let Err(e) = write_or_print(cfg.out.as_deref(), &report("verify", &cfg, &result)) {
        return eprint_input(&e);
    }
    code
}

/// Parse `key=a:b:step` or `key=v1,v2,…`; `;` separates keys.
/// Optional `mu` and `q` value lists.
pub type Grid = (Option<Vec<f64>>, Option<Vec<f64>>);

pub fn parse_grid(spec: &str) -> Result<Grid, InputError> {
    let bad = |m: String| InputError::Usage(m);
    let mut mu = None;
    let mut q = None;
    for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| bad(format!("grid part `{part}` lacks `=`")))?;
        let val = val.trim();
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("bad number `{s}` in grid")))
        };
        let values = if val.is_empty() {
            Vec::new()
        } else if val.contains(':') {
            let p: Vec<&str> = val.split(':').collect();
            if p.len() != 3 {
                return Err(bad(format!("range `{val}` must be start:stop:step")));
            }
            let (a, b, s) = (num(p[0])?, num(p[1])?, num(p[2])?);
            if !(s > 0.0) {
                return Err(bad("grid step must be positive".into()));
            }
            let n = if b < a {
                0
            } else {
                ((b - a) / s + 1e-9).floor() as usize + 1
            };
            (0..n).map(|k| a + k as f64 * s).collect()
        } else {
            val.split(',').map(num).collect::<Result<Vec<_>, _>>()?
        };
        match key.trim() {
            "mu" => mu = Some(values),
            "q" => q = Some(values),
            k => return Err(bad(format!("unknown grid key `{k}`"))),
        }
    }
    Ok((mu, q))
}

fn sweep_row(cfg: &RunConfig, q: f64, mu_v: Vec<f64>) -> SweepRow {
    let mu = DynParam::new(&mu_v, q);
    let mut row = SweepRow {
        q,
        mu: mu_v,
        margin: f64::NAN,
        terms: None,
        tail: None,
        linear_eq: None,
        product_vs_linear: None,
        dynamic: None,
        error: None,
    };
    let fail = |check: &str, e: &Error| ErrorEcho {
        check: check.into(),
        kind: e.kind().into(),
        message: e.to_string(),
    };
    let reps = match cfg.reps_at(q, true) {
        Ok(r) => r,
        Err(e) => {
            row.error = Some(ErrorEcho {
                check: "input".into(),
                kind: "BadInput".into(),
                message: e.to_string(),
            });
            return row;
        }
    };
    row.margin = convergence_margin(&reps[1], &mu).min;
    let data = match rdata(&reps[0], cfg.ordering) {
        Ok(d) => d,
        Err(e) => {
            row.error = Some(ErrorEcho {
                check: "input".into(),
                kind: "BadInput".into(),
                message: e.to_string(),
            });
            return row;
        }
    };
    let tw = match Twist::new(&reps[0], &reps[1], &data) {
        Ok(t) => t,
        Err(e) => {
            row.error = Some(fail("rmat", &e));
            return row;
        }
    };
    // a resonance explains a stalled product, so the linear error wins
    let product = tw.product(&mu, &cfg.pol);
    let linear = tw.linear(&mu);
    match (&product, &linear) {
        (Ok(fp), Ok(fl)) => {
            let b = diag(&crate::dynamical::b2_diag(&reps[0], &reps[1], &mu));
            row.linear_eq = Some(rel_residual(
                &(&fp.matrix * &b),
                &(&tw.rinv * &b * &fp.matrix),
            ));
            row.product_vs_linear = Some(rel_residual(&fp.matrix, fl));
        }
        (_, Err(e)) => row.error = Some(fail("linear_eq", e)),
        (Err(e), Ok(_)) => row.error = Some(fail("f_product", e)),
    }
    match product {
        Ok(fp) => (row.terms, row.tail) = (Some(fp.terms), Some(fp.tail)),
        Err(Error::NotConverged { terms, tail }) => {
            (row.terms, row.tail) = (Some(terms), Some(tail))
        }
        Err(_) => {}
    }
    if row.error.is_none() && reps.len() == 3 {
        let opts = DynOptions {
            pol: cfg.pol,
            method: cfg.dyn_method(),
            tol: cfg.tol,
        };
        match dynamic_checks([&reps[0], &reps[1], &reps[2]], &data, &mu, &opts) {
            Ok(d) => row.dynamic = Some(d),
            Err(f) => row.error = Some(ErrorEcho::from(&f)),
        }
    }
    row
}

pub fn cmd_sweep(a: &CommonArgs) -> i32 {
    let cfg = match RunConfig::from_args(a, Some((2, 3))) {
        Ok(c) => c,
        Err(e) => return eprint_input(&e),
    };
    let (mus, qs) = match cfg.grid.as_deref().map(parse_grid).transpose() {
        Ok(g) => g.unwrap_or((None, None)),
        Err(e) => return eprint_input(&e),
    };
    if qs
        .as_ref()
        .is_some_and(|v| v.iter().any(|q| !(*q > 0.0 && *q < 1.0)))
    {
        return eprint_input(&InputError::Usage(
            "grid q values must lie in (0, 1)".into(),
        ));
    }
    // fail fast on unreadable inputs
    if let Err(e) = cfg.reps_at(cfg.q, true)
        && qs.is_none()
    {
        return eprint_input(&e);
    }
    let rank = cfg.algebra.rank();
    let mu_points: Vec<Vec<f64>> = match mus {
        Some(v) => v.into_iter().map(|m| vec![m; rank]).collect(),
        None => vec![cfg.mu.clone()],
    };
    let q_points = qs.unwrap_or_else(|| vec![cfg.q]);
    let points: Vec<(f64, Vec<f64>)> = q_points
        .iter()
        .flat_map(|&q| mu_points.iter().map(move |m| (q, m.clone())))
        .collect();
    let rows: Vec<SweepRow> = points
        .into_par_iter()
        .map(|(q, m)| sweep_row(&cfg, q, m))
        .collect();
    for r in &rows {
        let terms = r.terms.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
        let err = r
            .error
            .as_ref()
            .map(|e| format!("{}/{}", e.check, e.kind))
            .unwrap_or_default();
        println!(
            "q={:<5} mu={:<24} margin={:>9.4} terms={:>4} {err}",
            r.q,
            format!("{:?}", r.mu),
            r.margin,
            terms
        );
    }
    if let Err(e) = write_or_print(
        cfg.out.as_deref().or(Some(Path::new("sweep.json"))),
        &report("sweep", &cfg, &rows),
    ) {
        return eprint_input(&e);
    }
    EXIT_OK
}

#[derive(Serialize, Debug)]
pub struct ValidateEntry {
    pub rep: String,
    pub report: RepReport,
}

pub fn cmd_validate_rep(a: &CommonArgs) -> i32 {
    let cfg = match RunConfig::from_args(a, Some((1, usize::MAX))) {
        Ok(c) => c,
        Err(e) => return eprint_input(&e),
    };
    let mut entries = Vec::new();
    for (spec, label) in cfg.specs.iter().zip(&cfg.labels) {
        let q = match spec {
            RepSpec::File(p) => match crate::io::read_json::<crate::io::RepFile>(p) {
                Ok(f) => f.q,
                Err(e) => return eprint_input(&e),
            },
            _ => cfg.q,
        };
        let rep = match spec.build(cfg.algebra, q, false) {
            Ok(r) => r,
            Err(e) => return eprint_input(&e),
        };
        let report = validate_rep(&rep, cfg.tol);
        let verdict = if report.pass {
            "pass".to_string()
        } else {
            format!("FAIL {:?}", report.failed)
        };
        println!(
            "{label}: weight={:.2e} parity={:.2e} ef={:.2e} serre={:.2e} {verdict}",
            report.weight, report.parity, report.ef, report.serre
        );
        entries.push(ValidateEntry {
            rep: label.clone(),
            report,
        });
    }
    let pass = entries.iter().all(|e| e.report.pass);
    if let Some(out) = cfg.out.as_deref()
        && let Err(e) = write_json(out, &report("validate-rep", &cfg, &entries))
    {
        return eprint_input(&e);
    }
    if pass { EXIT_OK } else { EXIT_FAIL }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let (mu, q) = parse_grid("mu=2:3:0.5; q=0.3,0.5").unwrap();
        assert_eq!(mu.unwrap(), vec![2.0, 2.5, 3.0]);
        assert_eq!(q.unwrap(), vec![0.3, 0.5]);
        let (mu, _) = parse_grid("mu=").unwrap();
        assert!(mu.unwrap().is_empty());
        assert!(parse_grid("nu=1").is_err());
        assert!(parse_grid("mu=1:2:0").is_err());
    }

    #[test]
    fn rep_specs() {
        assert_eq!(RepSpec::parse("spin:0.5").unwrap(), RepSpec::Spin(0.5));
        assert_eq!(
            RepSpec::parse("file:a.json").unwrap(),
            RepSpec::File("a.json".into())
        );
        assert!(RepSpec::parse("adjoint").is_err());
        assert!(RepSpec::Spin(0.5).build(AlgebraId::A2, 0.5, true).is_err());
    }
}
