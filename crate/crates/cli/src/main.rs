//! Command-line driver for the verification suites.
//!
//! Exit codes: 0 all identities pass, 1 at least one identity fails,
//! 2 usage/config error.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wittgauss_cli::suite::{run_suite, ClosedFormSel, SuiteConfig, SuiteKind};
use wittgauss_core::chars::SignConvention;
use wittgauss_core::gauss::KappaSpec;

#[derive(Parser)]
#[command(
    name = "wittgauss",
    version,
    about = "Exact verification suites for Gauss sums over truncated Witt vectors,\n\
             local epsilon factors, and finite-group character identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Davenport–Hasse sweep over the (p, k, n, s) grid.
    Dh(CommonArgs),
    /// Closed forms vs the naive Gauss-sum oracle, absolute values,
    /// vanishing, quadratic partial sums and reductions.
    Gauss(GaussArgs),
    /// Local epsilon factors: both displayed evaluation routes.
    Epsilon(CommonArgs),
    /// Mackey decomposition and Frobenius reciprocity.
    Mackey(GroupArgs),
    /// Euler-factor inductivity, Frobenius determinants, sign ledger.
    Euler(GroupArgs),
    /// Interpolation ledgers: archimedean, constants, p-Euler matching.
    Interp(RandomArgs),
    /// Every suite on the full default grid.
    ReportAll(CommonArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Appendix,
    GlobalSign,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct CommonArgs {
    /// Primes to sweep; a single value, "a..b" (inclusive) or "a,b,c".
    #[arg(long, default_value = "2,3,5")]
    p: String,
    /// Base-field degrees k (q = p^k).
    #[arg(long, default_value = "1,2")]
    k: String,
    /// Truncation lengths n.
    #[arg(long, default_value = "1..3")]
    n: String,
    /// Extension degrees s.
    #[arg(long, default_value = "1..3")]
    s: String,
    /// Enumeration bound on q^{ns} (env WITTGAUSS_BOUND overrides the
    /// default).
    #[arg(long)]
    bound: Option<u64>,
    /// Additive-character sign convention.
    #[arg(long, value_enum, default_value_t = ConventionArg::Appendix)]
    convention: ConventionArg,
    /// Additive twist κ: "teichmuller", "teichmuller:g", or "unit:<hex>".
    #[arg(long, default_value = "teichmuller")]
    kappa: String,
    /// Worker threads (0 = rayon default).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Seed for randomised sub-suites.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Serialise full values even in large sweeps.
    #[arg(long, default_value_t = false)]
    emit_values: bool,
}

#[derive(Args)]
struct GaussArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Restrict the closed-form comparison to one parity.
    #[arg(long, value_enum, default_value_t = ClosedFormArg::Auto)]
    closed_form: ClosedFormArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClosedFormArg {
    Auto,
    Even,
    Odd,
}

#[derive(Args)]
struct GroupArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Group name: S3, D4, Q8, A4, S4, V4, or C<n>. Default: the corpus.
    #[arg(long)]
    group: Option<String>,
    /// Randomised record count (euler).
    #[arg(long, default_value_t = 200)]
    random: usize,
}

#[derive(Args)]
struct RandomArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Randomised ledger count.
    #[arg(long, default_value_t = 1000)]
    random: usize,
}

fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
            let b: u64 = b.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
            if a > b {
                return Err(format!("empty range {part}"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|e| format!("bad value {part}: {e}"))?);
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_kappa(s: &str) -> Result<KappaSpec, String> {
    match s {
        "teichmuller" => Ok(KappaSpec::One),
        "teichmuller:g" => Ok(KappaSpec::TeichmullerPrimitive),
        other => {
            if let Some(hex) = other.strip_prefix("unit:") {
                let idx = u64::from_str_radix(hex.trim_start_matches("0x"), 16)
                    .map_err(|e| format!("bad unit index: {e}"))?;
                Ok(KappaSpec::UnitIndex(idx))
            } else {
                Err(format!("unknown kappa spec {other}"))
            }
        }
    }
}

fn build_config(suite: SuiteKind, args: &CommonArgs) -> Result<SuiteConfig, String> {
    let env_bound = std::env::var("WITTGAUSS_BOUND")
        .ok()
        .map(|v| v.parse::<u64>().map_err(|e| format!("bad WITTGAUSS_BOUND: {e}")))
        .transpose()?;
    let mut cfg = SuiteConfig::defaults(suite);
    cfg.p = parse_list(&args.p)?;
    cfg.k = parse_list(&args.k)?.into_iter().map(|v| v as usize).collect();
    cfg.n = parse_list(&args.n)?.into_iter().map(|v| v as usize).collect();
    cfg.s = parse_list(&args.s)?.into_iter().map(|v| v as usize).collect();
    cfg.bound = args.bound.or(env_bound).unwrap_or(1 << 16);
    cfg.convention = match args.convention {
        ConventionArg::Appendix => SignConvention::Appendix,
        ConventionArg::GlobalSign => SignConvention::GlobalSign,
    };
    cfg.kappa = parse_kappa(&args.kappa)?;
    cfg.workers = args.workers;
    cfg.seed = args.seed;
    cfg.emit_values = args.emit_values;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, common) = match &cli.command {
        Command::Dh(a) => (build_config(SuiteKind::Dh, a), a),
        Command::Gauss(a) => {
            let mut cfg = build_config(SuiteKind::Gauss, &a.common);
            if let Ok(c) = cfg.as_mut() {
                c.closed_form = match a.closed_form {
                    ClosedFormArg::Auto => ClosedFormSel::Auto,
                    ClosedFormArg::Even => ClosedFormSel::Even,
                    ClosedFormArg::Odd => ClosedFormSel::Odd,
                };
            }
            (cfg, &a.common)
        }
        Command::Epsilon(a) => (build_config(SuiteKind::Epsilon, a), a),
        Command::Mackey(a) => {
            let mut cfg = build_config(SuiteKind::Mackey, &a.common);
            if let Ok(c) = cfg.as_mut() {
                c.group = a.group.clone();
            }
            (cfg, &a.common)
        }
        Command::Euler(a) => {
            let mut cfg = build_config(SuiteKind::Euler, &a.common);
            if let Ok(c) = cfg.as_mut() {
                c.group = a.group.clone();
                c.random = a.random;
            }
            (cfg, &a.common)
        }
        Command::Interp(a) => {
            let mut cfg = build_config(SuiteKind::Interp, &a.common);
            if let Ok(c) = cfg.as_mut() {
                c.random = a.random;
            }
            (cfg, &a.common)
        }
        Command::ReportAll(a) => (build_config(SuiteKind::ReportAll, a), a),
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
    };

    let start = Instant::now();
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let wall = start.elapsed();

    let body = match common.format {
        FormatArg::Json => report.to_json(),
        FormatArg::Csv => report.to_csv(),
        FormatArg::Text => report.to_text(),
    };
    let write_result = match &common.out {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = write_result {
        eprintln!("i/o error: {e}");
        return ExitCode::from(2);
    }
    // Wall time is reported out of band so that report bytes stay
    // deterministic across worker counts.
    eprintln!(
        "suite {}: {} passed, {} failed in {:.3}s",
        report.suite,
        report.totals.pass,
        report.totals.fail,
        wall.as_secs_f64()
    );
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
