//! The `qsk` command line.
//!
//! Exit codes: 0 success, 1 a suite record failed, 2 invalid parameters or
//! configuration, 3 the run itself failed (IO, aborted worker).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::SuiteConfig;
use crate::report::Report;
use crate::suite::{catalog, run_suite};
use crate::QskError;
use qsk_core::connect::{aw_connection, lql_connection, qlag_connection, sample_points, ultra_connection, ConnectionExpansion};
use qsk_core::polyfam::{AwParams, FamilyParams, LqlParams, QLagParams, UltraParams};
use qsk_core::qpoch::QBase;
use qsk_core::{c64, real, C64};

#[derive(Debug, Parser)]
#[command(name = "qsk", version, about = "q-orthogonal polynomials, connection coefficients and identity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one polynomial.
    Eval(EvalArgs),
    /// Expand a polynomial in the same family with one parameter replaced.
    Connect(ConnectArgs),
    /// Run verification suites and write a report.
    Verify(VerifyArgs),
    /// List every check tag with its class and parameters.
    ListIdentities,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Askey–Wilson (a, b, c, d)
    Aw,
    /// continuous q-ultraspherical (beta)
    Cqu,
    /// little q-Laguerre (a)
    Lql,
    /// q-Laguerre (alpha)
    Qlag,
}

/// Accepts `re` or `re,im`.
fn parse_complex(s: &str) -> Result<C64, String> {
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once(',') {
        Some((re, im)) => Ok(c64(parse(re)?, parse(im)?)),
        None => Ok(real(parse(s)?)),
    }
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: f64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub b: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub c: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub d: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Option<C64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
}

#[derive(Debug, Args)]
pub struct ConnectArgs {
    /// Source parameters as for `eval`; the replaced parameter is `--alpha`
    /// for aw (replacing a), `--gamma` for cqu, `--b` for lql and `--beta`
    /// for qlag.
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON suite configuration; defaults apply to absent fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the records as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Comma-separated tags or groups replacing the configured list.
    #[arg(long, value_delimiter = ',')]
    pub tags: Option<Vec<String>>,
    /// Series term cap.
    #[arg(long, env = "QSK_MAX_TERMS")]
    pub max_terms: Option<usize>,
    /// Worker threads; the report does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Parses `args` and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return u8::try_from(e.exit_code()).unwrap_or(2);
        }
    };
    let out = std::io::stdout();
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(&a, &mut out.lock()),
        Command::Connect(a) => cmd_connect(&a, &mut out.lock()),
        Command::Verify(a) => cmd_verify(&a, &mut out.lock()),
        Command::ListIdentities => cmd_list(&mut out.lock()),
    };
    match result {
        Ok(code) => code,
        // a closed reader such as `| head` is not a failure
        Err(QskError::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("qsk: {e}");
            e.exit_code()
        }
    }
}

fn need<T>(v: Option<T>, name: &str) -> Result<T, QskError> {
    v.ok_or_else(|| QskError::Params(format!("--{name} is required for this family")))
}

fn real_arg(v: Option<C64>, name: &str) -> Result<f64, QskError> {
    let v = need(v, name)?;
    if v.im != 0.0 {
        return Err(QskError::Params(format!("--{name} must be real for this family")));
    }
    Ok(v.re)
}

fn source_family(a: &FamilyArgs) -> Result<FamilyParams, QskError> {
    let q = QBase::new(a.q)?;
    Ok(match a.family {
        Family::Aw => FamilyParams::AskeyWilson(AwParams::new(need(a.a, "a")?, need(a.b, "b")?, need(a.c, "c")?, need(a.d, "d")?, q)),
        Family::Cqu => FamilyParams::ContQUltra(UltraParams::new(need(a.beta, "beta")?, q)?),
        Family::Lql => FamilyParams::LittleQLaguerre(LqlParams::new(real_arg(a.a, "a")?, q)?),
        Family::Qlag => FamilyParams::QLaguerre(QLagParams::new(real_arg(a.alpha, "alpha")?, q)?),
    })
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn io(e: std::io::Error) -> QskError {
    QskError::Io { path: "<stdout>".into(), source: e }
}

pub fn cmd_eval(a: &EvalArgs, out: &mut impl Write) -> Result<u8, QskError> {
    let fam = source_family(&a.family)?;
    let v = fam.eval(a.family.n, a.x)?;
    let w = |out: &mut dyn Write, k: &str, v: String| writeln!(out, "{k:<8}{v}").map_err(io);
    w(out, "family", fam.family().tag().into())?;
    w(out, "n", a.family.n.to_string())?;
    w(out, "x", a.x.to_string())?;
    w(out, "q", a.family.q.to_string())?;
    let params = match fam {
        FamilyParams::AskeyWilson(p) => format!("a={} b={} c={} d={}", fmt_c(p.a), fmt_c(p.b), fmt_c(p.c), fmt_c(p.d)),
        FamilyParams::ContQUltra(p) => format!("beta={}", p.beta),
        FamilyParams::LittleQLaguerre(p) => format!("a={}", p.a),
        FamilyParams::QLaguerre(p) => format!("alpha={}", p.alpha),
    };
    w(out, "params", params)?;
    w(out, "value", fmt_c(v))?;
    Ok(0)
}

pub fn cmd_connect(a: &ConnectArgs, out: &mut impl Write) -> Result<u8, QskError> {
    let f = &a.family;
    let q = QBase::new(f.q)?;
    let e: ConnectionExpansion = match (f.family, source_family(f)?) {
        (Family::Aw, FamilyParams::AskeyWilson(p)) => aw_connection(f.n, &p, need(f.alpha, "alpha")?)?,
        (Family::Cqu, FamilyParams::ContQUltra(p)) => ultra_connection(f.n, p.beta, need(a.gamma, "gamma")?, q)?,
        (Family::Lql, FamilyParams::LittleQLaguerre(p)) => lql_connection(f.n, p.a, real_arg(f.b, "b")?, q)?,
        (Family::Qlag, FamilyParams::QLaguerre(p)) => qlag_connection(f.n, p.alpha, need(f.beta, "beta")?, q)?,
        _ => unreachable!("source_family follows --family"),
    };
    let mut rows: Vec<(usize, C64)> = e.nonzero().copied().collect();
    rows.sort_by_key(|r| core::cmp::Reverse(r.0));
    let xs = sample_points(&e.source, 20);
    let mut partial = vec![real(0.0); xs.len()];
    let source = xs.iter().map(|&x| e.source.eval(e.n, x)).collect::<qsk_core::Result<Vec<_>>>()?;
    writeln!(out, "k\tcoefficient\tcumulative_residual").map_err(io)?;
    for (k, c) in rows {
        let mut worst = 0.0f64;
        for (i, &x) in xs.iter().enumerate() {
            partial[i] += c * e.target.eval(k, x)?;
            worst = worst.max((partial[i] - source[i]).norm());
        }
        writeln!(out, "{k}\t{}\t{worst:e}", fmt_c(c)).map_err(io)?;
    }
    Ok(0)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut impl Write) -> Result<u8, QskError> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| QskError::Io { path: path.display().to_string(), source: e })?;
            SuiteConfig::from_json(&text)?
        }
        None => SuiteConfig::default(),
    };
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(p) = a.points {
        cfg.points_per_identity = p;
    }
    if let Some(t) = &a.tags {
        cfg.tags = t.clone();
    }
    if let Some(m) = a.max_terms {
        cfg.caps.max_terms = m;
    }
    cfg.validate()?;
    let report = run_with_threads(&cfg, a.threads)?;
    let write = |path: &PathBuf, bytes: &[u8]| {
        fs::write(path, bytes).map_err(|e| QskError::Io { path: path.display().to_string(), source: e })
    };
    write(&a.out, report.to_json().as_bytes())?;
    if let Some(path) = &a.csv {
        let mut buf = Vec::new();
        report.write_csv(&mut buf).map_err(|e| QskError::Infrastructure(e.to_string()))?;
        write(path, &buf)?;
    }
    let s = &report.summary;
    writeln!(out, "records {} passed {} failed {} flagged {}", s.records, s.passed, s.failed, s.flagged).map_err(io)?;
    for t in s.per_tag.iter().filter(|t| t.failed > 0) {
        writeln!(out, "  {} failed {}/{} max residual {:e}", t.tag, t.failed, t.records, t.max_residual.0).map_err(io)?;
    }
    Ok(report.exit_code())
}

/// Runs the suite on a dedicated pool; a panicking worker aborts the run.
pub fn run_with_threads(cfg: &SuiteConfig, threads: Option<usize>) -> Result<Report, QskError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| QskError::Infrastructure(e.to_string()))?;
    let res = catch_unwind(AssertUnwindSafe(|| pool.install(|| run_suite(cfg))));
    match res {
        Ok(r) => r,
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            Err(QskError::Infrastructure(msg.unwrap_or_else(|| "worker panicked".into())))
        }
    }
}

pub fn cmd_list(out: &mut impl Write) -> Result<u8, QskError> {
    writeln!(out, "tag\tclass\tparameters\tnote").map_err(io)?;
    for c in catalog() {
        let note = if c.is_flagged() { "unresolved-in-paper" } else { "" };
        writeln!(out, "{}\t{}\t{}\t{note}", c.tag(), c.class(), c.parameters()).map_err(io)?;
    }
    Ok(0)
}
