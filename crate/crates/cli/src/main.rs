//! Command-line front end: suite execution with machine-readable reports,
//! plus one-off entropy, volume, M-position, and counterexample-sweep runs.

use clap::{Args, Parser, Subcommand};
use entrovol::bodies::Body;
use entrovol::checks::{self, Budget, CheckResult, SuiteConfig, Verdict};
use entrovol::entropy::{entropy_analytic, entropy_plugin_mc, entropy_sum_smoothed};
use entrovol::linalg::SquareMatrix;
use entrovol::measures::Density;
use entrovol::positions::m_position_search;
use entrovol::rng::SeededStream;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "entrovol", version, about = "Numerical checks for entropy-volume inequalities of convex measures")]
struct Cli {
    /// Worker threads (overridden by ENTROVOL_WORKERS if set). Results are
    /// invariant to this setting.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the inequality suite and write a report.
    Verify(VerifyArgs),
    /// Entropy (and entropy power) of a density or of a sum of two.
    Entropy(EntropyArgs),
    /// Volume of a body, exact when available, Monte Carlo otherwise.
    Volume(VolumeArgs),
    /// Search for the volume-preserving map maximizing ball overlap.
    Mposition(MpositionArgs),
    /// Sweep the one-dimensional heavy-tail pairs showing the reverse
    /// entropy power inequality cannot hold class-wide.
    DemoCounterexample(CounterArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite selection (only "all" is defined).
    #[arg(long, default_value = "all")]
    suite: String,
    /// Comma-separated dimensions, each between 1 and 6.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    dim: Vec<usize>,
    #[arg(long, default_value_t = 60_000)]
    samples: usize,
    /// Inner smoothing size for entropy-of-sum estimates.
    #[arg(long, default_value_t = 256)]
    inner_m: usize,
    #[arg(long, default_value_t = 3.0)]
    beta0: f64,
    /// Extra Pareto betas for the essential-support sweep at n = 2.
    #[arg(long, value_delimiter = ',')]
    betas: Vec<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct EntropyArgs {
    /// Family shortcut: uniform01 | cube | gaussian | exponential | pareto | power-simplex.
    #[arg(long, conflicts_with_all = ["sum", "density_json"])]
    family: Option<String>,
    /// Two comma-separated family shortcuts; reports the entropy of X + Y.
    #[arg(long, value_delimiter = ',')]
    sum: Vec<String>,
    /// Inline JSON density literal (see the README for the schema).
    #[arg(long)]
    density_json: Option<String>,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long)]
    kappa_tilde: Option<f64>,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long, default_value_t = 256)]
    inner_m: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct VolumeArgs {
    /// Body shortcut: ball | cube | simplex.
    #[arg(long, conflicts_with = "body_json")]
    body: Option<String>,
    /// Inline JSON body literal.
    #[arg(long)]
    body_json: Option<String>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct MpositionArgs {
    /// Body shortcut: ellipsoid (with --aspect) | cube, or JSON via --body-json.
    #[arg(long, default_value = "ellipsoid")]
    body: String,
    #[arg(long)]
    body_json: Option<String>,
    #[arg(long, default_value_t = 10.0)]
    aspect: f64,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 500)]
    budget: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct CounterArgs {
    #[arg(long, value_delimiter = ',', default_value = "3.0,1.5,1.2")]
    betas: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 256)]
    inner_m: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Serialize)]
struct Report<'a> {
    tool_version: &'a str,
    root_seed: u64,
    config_digest: String,
    results: &'a [CheckResult],
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = std::env::var("ENTROVOL_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .or(cli.workers);
    if let Some(w) = workers {
        if w == 0 {
            eprintln!("error: worker count must be positive");
            return ExitCode::from(2);
        }
        if rayon::ThreadPoolBuilder::new().num_threads(w).build_global().is_err() {
            eprintln!("warning: rayon pool already initialized; --workers ignored");
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Verify(args) => cmd_verify(args),
        Command::Entropy(args) => cmd_entropy(args).map(|()| ExitCode::SUCCESS),
        Command::Volume(args) => cmd_volume(args).map(|()| ExitCode::SUCCESS),
        Command::Mposition(args) => cmd_mposition(args).map(|()| ExitCode::SUCCESS),
        Command::DemoCounterexample(args) => cmd_counter(args).map(|()| ExitCode::SUCCESS),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    if args.suite != "all" {
        return Err(format!("unknown suite '{}'; only 'all' is defined", args.suite));
    }
    let config = SuiteConfig {
        dims: args.dim.clone(),
        samples: args.samples,
        inner_m: args.inner_m,
        beta0: args.beta0,
        betas: args.betas.clone(),
        seed: args.seed,
        ..SuiteConfig::default()
    };
    config.validate().map_err(|e| e.to_string())?;
    let results = checks::run_suite(&config).map_err(|e| e.to_string())?;
    let digest = fnv_hex(serde_json::to_string(&config).map_err(|e| e.to_string())?.as_bytes());
    let rendered = match args.format {
        ReportFormat::Json => {
            let report = Report {
                tool_version: env!("CARGO_PKG_VERSION"),
                root_seed: args.seed,
                config_digest: digest,
                results: &results,
            };
            let mut s = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
        ReportFormat::Csv => render_csv(&results),
    };
    match &args.out {
        Some(path) => std::fs::write(path, rendered.as_bytes()).map_err(|e| e.to_string())?,
        None => print!("{rendered}"),
    }
    let (pass, fail, report) = checks::tally(&results);
    eprintln!("checks: {pass} pass, {fail} fail, {report} report-only");
    Ok(if fail == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn render_csv(results: &[CheckResult]) -> String {
    let mut out = String::from("name,n,instance,lhs,rhs,slack,stderr,verdict,seed\n");
    for r in results {
        let verdict = match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ReportOnly => "report-only",
        };
        out.push_str(&format!(
            "{},{},\"{}\",{},{},{},{},{},{}\n",
            r.name, r.dim, r.instance, r.lhs, r.rhs, r.slack, r.stderr, verdict, r.seed
        ));
    }
    out
}

fn parse_family(name: &str, args: &EntropyArgs) -> Result<Density, String> {
    let n = args.dim;
    match name {
        "uniform01" => Ok(Density::uniform(Body::Box { lo: vec![0.0; n], hi: vec![1.0; n] })),
        "cube" => Ok(Density::uniform(Body::Box { lo: vec![-0.5; n], hi: vec![0.5; n] })),
        "gaussian" => Ok(Density::standard_gaussian(n)),
        "exponential" => Density::exponential_orthant(n, args.lambda).map_err(|e| e.to_string()),
        "pareto" => {
            let beta = args.beta.ok_or("pareto needs --beta")?;
            Density::pareto_orthant(n, beta).map_err(|e| e.to_string())
        }
        "power-simplex" => {
            let kt = args.kappa_tilde.ok_or("power-simplex needs --kappa-tilde")?;
            Density::power_simplex(n, kt).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown family '{other}'")),
    }
}

fn cmd_entropy(args: EntropyArgs) -> Result<(), String> {
    let stream = SeededStream::new(args.seed, "cli/entropy");
    if args.sum.len() == 2 {
        let x = parse_family(&args.sum[0], &args)?;
        let y = parse_family(&args.sum[1], &args)?;
        let ev = entropy_sum_smoothed(&x, &y, args.samples, args.inner_m, &stream)
            .map_err(|e| e.to_string())?;
        println!(
            "h(X+Y) = {:.6} nats  (stderr {:.6}, smoothed, N = {}, M = {}{})",
            ev.h,
            ev.stderr,
            args.samples,
            args.inner_m,
            if ev.bias_flag { ", bias flag set" } else { "" }
        );
        println!("H(X+Y) = {:.6}  (stderr {:.6})", ev.power(), ev.power_stderr());
        return Ok(());
    }
    if !args.sum.is_empty() {
        return Err("--sum needs exactly two comma-separated families".into());
    }
    let density = if let Some(json) = &args.density_json {
        serde_json::from_str::<Density>(json).map_err(|e| format!("bad density JSON: {e}"))?
    } else if let Some(name) = &args.family {
        parse_family(name, &args)?
    } else {
        return Err("one of --family, --sum, --density-json is required".into());
    };
    match entropy_analytic(&density) {
        Ok(ev) => {
            println!("h = {:.6} nats (analytic)", ev.h);
            println!("H = {:.6}", ev.power());
        }
        Err(entrovol::Error::NoClosedForm) => {
            let ev = entropy_plugin_mc(&density, args.samples, &stream)
                .map_err(|e| e.to_string())?;
            println!("h = {:.6} nats (stderr {:.6}, plug-in, N = {})", ev.h, ev.stderr, args.samples);
            println!("H = {:.6}  (stderr {:.6})", ev.power(), ev.power_stderr());
        }
        Err(e) => return Err(e.to_string()),
    }
    Ok(())
}

fn cmd_volume(args: VolumeArgs) -> Result<(), String> {
    let n = args.dim;
    let body = if let Some(json) = &args.body_json {
        serde_json::from_str::<Body>(json).map_err(|e| format!("bad body JSON: {e}"))?
    } else {
        match args.body.as_deref() {
            Some("ball") => Body::Ball { center: vec![0.0; n], radius: args.r },
            Some("cube") => Body::Box { lo: vec![0.0; n], hi: vec![1.0; n] },
            Some("simplex") => checks::standard_simplex(n),
            Some(other) => return Err(format!("unknown body '{other}'")),
            None => return Err("one of --body, --body-json is required".into()),
        }
    };
    match body.volume_exact() {
        Ok(v) => println!("volume = {v:.12} (exact)"),
        Err(entrovol::Error::ExactVolumeUnavailable) => {
            let stream = SeededStream::new(args.seed, "cli/volume");
            let est = body.volume_mc(args.samples, &stream).map_err(|e| e.to_string())?;
            println!(
                "volume = {:.6} (hit-or-miss, stderr {:.6}, N = {})",
                est.value, est.stderr, est.samples
            );
        }
        Err(e) => return Err(e.to_string()),
    }
    Ok(())
}

fn cmd_mposition(args: MpositionArgs) -> Result<(), String> {
    let n = args.dim;
    let body = if let Some(json) = &args.body_json {
        serde_json::from_str::<Body>(json).map_err(|e| format!("bad body JSON: {e}"))?
    } else {
        match args.body.as_str() {
            "ellipsoid" => {
                if !(args.aspect >= 1.0) {
                    return Err("--aspect must be at least 1".into());
                }
                let mut diag = vec![1.0; n];
                diag[0] = args.aspect;
                diag[n - 1] = 1.0 / args.aspect;
                Body::Ellipsoid { center: vec![0.0; n], shape: SquareMatrix::from_diag(&diag) }
            }
            "cube" => Body::Box { lo: vec![-0.5; n], hi: vec![0.5; n] },
            other => return Err(format!("unknown body '{other}'")),
        }
    };
    let unit = body.scale_to_unit_volume().map_err(|e| e.to_string())?;
    let stream = SeededStream::new(args.seed, "cli/mposition");
    let pos = m_position_search(&unit, args.budget, args.samples, &stream)
        .map_err(|e| e.to_string())?;
    println!(
        "objective |A cap D|^(1/n) / |A|^(1/n) = {:.4} (stderr {:.4})",
        pos.objective, pos.objective_stderr
    );
    println!(
        "evaluations = {}, det(map) = {:.12}{}",
        pos.iterations,
        pos.map.det(),
        if pos.budget_exhausted { ", budget exhausted (best-so-far)" } else { "" }
    );
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:+.5}", pos.map[(i, j)])).collect();
        println!("  [{}]", row.join(", "));
    }
    Ok(())
}

fn cmd_counter(args: CounterArgs) -> Result<(), String> {
    let stream = SeededStream::new(args.seed, "cli/counter");
    let budget = Budget { samples: args.samples, inner_m: args.inner_m };
    let results = checks::demo_counterexample(&args.betas, &budget, &stream)
        .map_err(|e| e.to_string())?;
    println!("{:<28} {:>14} {:>12}", "instance", "min ratio", "stderr");
    for r in &results {
        if r.name == "counter.ratio" {
            println!("{:<28} {:>14.4} {:>12.4}", r.instance, r.lhs, r.stderr);
        }
    }
    for r in &results {
        if r.name == "counter.trend" {
            let verdict = if r.verdict == Verdict::Pass { "pass" } else { "fail" };
            println!("trend {:<22} separation {:>12.4}  {}", r.instance, r.slack, verdict);
        }
    }
    Ok(())
}

// FNV-1a over the canonical config serialization; identifies the
// configuration in reports without pulling in a hash dependency.
fn fnv_hex(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}
