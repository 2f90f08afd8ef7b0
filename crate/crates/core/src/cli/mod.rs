//! Command-line front end: figure sweeps, single-point queries, the teleportation demo and the selftest.

pub mod config;
pub mod output;
pub mod selftest;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use serde_json::json;

use self::config::{
    parse_list, parse_theories, validate_eps, validate_m_max, validate_p, FileConfig, OutputFormat, SweepConfig,
    DEFAULT_EPS,
};
use self::output::{figure2_csv, figure2_json, fmt_sig, json_num, pretty, SCHEMA_VERSION};
use self::selftest::{run_selftest, SelftestOptions, ALL_CRITERIA};
use self::sweep::{rows_for_point, run_figure2, run_sweep, Figure2Row};
use crate::qmath::{states, Observable};
use crate::sampler::{estimate, exact_expectation, required_samples, SamplerConfig};
use crate::vrd::{build_virtual_operation_teleport, overhead_bounds, Theory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "vrd", version, about = "Overheads and rates of virtual resource distillation")]
struct Cli {
    /// JSON file with default settings; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads (default: logical processors).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep noise and accuracy; one row per (eps, p, m).
    Figure2(SweepArgs),
    /// Overhead bounds at given noise levels.
    Overhead(PointArgs),
    /// Conventional and virtual rates at given noise levels.
    Rate(PointArgs),
    /// Sample the explicit two-qubit virtual operation.
    Teleport(TeleportArgs),
    /// Run the acceptance checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write data to standard output.
    #[arg(long)]
    stdout: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// coherence, entanglement, magic or all.
    #[arg(long)]
    theory: Option<String>,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long)]
    p_grid: Option<String>,
    /// Comma-separated accuracies.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    m_max: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct PointArgs {
    #[arg(long)]
    theory: Option<String>,
    /// Comma-separated noise levels.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    m_max: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct TeleportArgs {
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Also fail on checks marked as known defects.
    #[arg(long)]
    strict: bool,
    /// Comma-separated criterion numbers (default: all).
    #[arg(long)]
    criteria: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Multiplies every tolerance (test hook).
    #[arg(long, hide = true, default_value_t = 1.0)]
    tolerance_scale: f64,
}

enum CliError {
    Usage(String),
    Failure(String),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::InvalidArgument(_) | crate::Error::Unsupported(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

type CliResult = Result<i32, CliError>;

fn init_logging() {
    let env = env_logger::Env::new().filter_or("VRD_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parses `args` (program name first) and runs the command; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> CliResult {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(CliError::Usage)?,
        None => FileConfig::default(),
    };
    let workers = cli.workers.or(file.workers);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Failure(e.to_string()))?;
    pool.install(|| match cli.command {
        Command::Figure2(a) => figure2(a, &file),
        Command::Overhead(a) => overhead(a, &file),
        Command::Rate(a) => rate(a, &file),
        Command::Teleport(a) => teleport(a, &file),
        Command::Selftest(a) => selftest(a, &file),
    })
}

fn usage<T>(r: Result<T, String>) -> Result<T, CliError> {
    r.map_err(CliError::Usage)
}

fn theories(flag: &Option<String>, file: &FileConfig) -> Result<Vec<Theory>, CliError> {
    usage(parse_theories(flag.as_deref().or(file.theory.as_deref()).unwrap_or("all")))
}

fn eps_list(flag: &Option<String>, file: &FileConfig, default: &[f64]) -> Result<Vec<f64>, CliError> {
    let eps = match flag {
        Some(s) => usage(parse_list(s))?,
        None => file.eps_list.clone().unwrap_or_else(|| default.to_vec()),
    };
    usage(validate_eps(&eps))?;
    Ok(eps)
}

/// Where data goes: a file, or standard output.
enum Sink {
    Stdout,
    File(PathBuf),
}

fn sink(out: &OutputArgs, file: &FileConfig, default_name: Option<String>) -> Result<(Sink, OutputFormat), CliError> {
    let path = out.out.clone().or_else(|| file.output_path.clone());
    let format = out
        .format
        .or(file.format)
        .or_else(|| match path.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("json") => Some(OutputFormat::Json),
            _ => None,
        })
        .unwrap_or(OutputFormat::Csv);
    if out.stdout && out.out.is_some() {
        return Err(CliError::Usage("--stdout and --out are mutually exclusive".into()));
    }
    let sink = match (out.stdout, path, default_name) {
        (true, _, _) => Sink::Stdout,
        (false, Some(p), _) => Sink::File(p),
        (false, None, Some(name)) => Sink::File(PathBuf::from(format!("{name}.{}", format.extension()))),
        (false, None, None) => Sink::Stdout,
    };
    Ok((sink, format))
}

fn emit(sink: &Sink, text: &str) -> Result<(), CliError> {
    match sink {
        Sink::Stdout => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush())
        }
        Sink::File(p) => {
            info!("writing {}", p.display());
            std::fs::write(p, text)
        }
    }
    .map_err(|e| CliError::Failure(format!("cannot write output: {e}")))
}

fn flagged_exit(rows: &[Figure2Row]) -> i32 {
    let n = rows.iter().filter(|r| r.error.is_some()).count();
    if n > 0 {
        warn!("{n} rows flagged by solver failures");
        EXIT_FAILURE
    } else {
        EXIT_OK
    }
}

fn figure2(a: SweepArgs, file: &FileConfig) -> CliResult {
    let ths = theories(&a.theory, file)?;
    let p_grid = match &a.p_grid {
        Some(s) => Some(usage(parse_list(s))?),
        None => file.p_grid.clone(),
    };
    let eps = eps_list(&a.eps, file, &DEFAULT_EPS)?;
    let mut configs = Vec::new();
    for &t in &ths {
        let mut c = SweepConfig::new(t);
        if let Some(g) = &p_grid {
            c.p_grid = g.clone();
        }
        c.eps_list = eps.clone();
        if let Some(m) = a.m_max.or(file.m_max) {
            c.m_max = m;
        }
        usage(c.validate())?;
        configs.push(c);
    }
    let name = if ths.len() == 1 { format!("figure2-{}", ths[0]) } else { "figure2".to_string() };
    let (sink, format) = sink(&a.output, file, Some(name))?;
    let rows: Vec<Figure2Row> = configs.iter().flat_map(run_figure2).collect();
    let text = match format {
        OutputFormat::Csv => figure2_csv(&rows),
        OutputFormat::Json => figure2_json(&rows),
    };
    emit(&sink, &text)?;
    Ok(flagged_exit(&rows))
}

struct PointSpec {
    theories: Vec<Theory>,
    ps: Vec<f64>,
    eps: Vec<f64>,
    m_max: Option<usize>,
}

fn point_spec(a: &PointArgs, file: &FileConfig) -> Result<PointSpec, CliError> {
    let ps = match &a.p {
        Some(s) => usage(parse_list(s))?,
        None => file
            .p
            .clone()
            .ok_or_else(|| CliError::Usage("--p is required".into()))?,
    };
    usage(validate_p(&ps))?;
    let m_max = a.m_max.or(file.m_max);
    let theories = theories(&a.theory, file)?;
    if let Some(m) = m_max {
        for &t in &theories {
            usage(validate_m_max(t, m))?;
        }
    }
    Ok(PointSpec {
        theories,
        ps,
        eps: eps_list(&a.eps, file, &[0.0])?,
        m_max,
    })
}

fn overhead(a: PointArgs, file: &FileConfig) -> CliResult {
    let spec = point_spec(&a, file)?;
    let (sink, format) = sink(&a.output, file, None)?;
    let mut csv = String::from("theory,p,eps,m,C_lower,C_upper,C_exact,closed_form,method,relaxation\n");
    let mut rows = Vec::new();
    for &t in &spec.theories {
        let m_max = spec.m_max.unwrap_or(t.default_m_max());
        for &eps in &spec.eps {
            for &p in &spec.ps {
                let rho = t.noisy_state(p)?;
                for m in 1..=m_max {
                    let o = overhead_bounds(&rho, m, eps, t)?;
                    csv.push_str(&format!(
                        "{t},{},{},{m},{},{},{},{},{},{}\n",
                        fmt_sig(p),
                        fmt_sig(eps),
                        fmt_sig(o.lower),
                        fmt_sig(o.upper),
                        o.exact.map(fmt_sig).unwrap_or_default(),
                        o.closed_form.map(fmt_sig).unwrap_or_default(),
                        o.method.label(),
                        o.relaxation
                    ));
                    rows.push(json!({
                        "theory": t.name(),
                        "p": json_num(p),
                        "eps": json_num(eps),
                        "m": m,
                        "C_lower": json_num(o.lower),
                        "C_upper": json_num(o.upper),
                        "C_exact": o.exact.map_or(serde_json::Value::Null, json_num),
                        "closed_form": o.closed_form.map_or(serde_json::Value::Null, json_num),
                        "method": o.method.label(),
                        "relaxation": o.relaxation,
                    }));
                }
            }
        }
    }
    let text = match format {
        OutputFormat::Csv => csv,
        OutputFormat::Json => pretty(&json!({"schema_version": SCHEMA_VERSION, "kind": "overhead", "rows": rows})),
    };
    emit(&sink, &text)?;
    Ok(EXIT_OK)
}

fn rate(a: PointArgs, file: &FileConfig) -> CliResult {
    let spec = point_spec(&a, file)?;
    let (sink, format) = sink(&a.output, file, None)?;
    let mut rows = Vec::new();
    for &t in &spec.theories {
        let m_max = spec.m_max.unwrap_or(t.default_m_max());
        for pt in run_sweep(t, &spec.ps, &spec.eps, m_max) {
            rows.extend(rows_for_point(&pt, m_max));
        }
    }
    let text = match format {
        OutputFormat::Csv => figure2_csv(&rows),
        OutputFormat::Json => figure2_json(&rows),
    };
    emit(&sink, &text)?;
    Ok(flagged_exit(&rows))
}

fn teleport(a: TeleportArgs, file: &FileConfig) -> CliResult {
    let p = a
        .p
        .or_else(|| file.p.as_ref().and_then(|v| v.first().copied()))
        .ok_or_else(|| CliError::Usage("--p is required".into()))?;
    if !(1.0 / 3.0 - 1e-15..=1.0).contains(&p) {
        return Err(CliError::Usage(format!(
            "p = {p}: the explicit virtual operation exists only for 1/3 <= p <= 1, where the input's target fidelity reaches the free bound of 1/2"
        )));
    }
    let samples = a.samples.or(file.samples).unwrap_or(100_000);
    let seed = a.seed.or(file.seed).unwrap_or(0);
    let cfg = SamplerConfig::new(samples, seed);
    usage(cfg.validate().map_err(|e| e.to_string()))?;
    let (sink, format) = sink(&a.output, file, None)?;

    let vop = build_virtual_operation_teleport(p)?;
    let rho = Theory::Entanglement.noisy_state(p)?;
    let m = Observable::projector(&states::bell())?;
    let exact = exact_expectation(&vop, &rho, &m)?;
    let rep = estimate(&vop, &rho, &m, &cfg)?;
    let c = vop.overhead();
    let needed = required_samples(c, cfg.beta, cfg.delta)?;
    let within = rep.within_bound().unwrap_or(false);
    let exact_ok = (exact - 1.0).abs() <= 1e-10;

    let text = match format {
        OutputFormat::Json => pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "teleport",
            "p": json_num(p),
            "lambda_plus": json_num(vop.lambda_plus()),
            "lambda_minus": json_num(vop.lambda_minus()),
            "C": json_num(c),
            "exact": json_num(exact),
            "mean": json_num(rep.mean),
            "std_error": json_num(rep.std_error),
            "samples": samples,
            "seed": seed,
            "delta": json_num(cfg.delta),
            "hoeffding_bound": json_num(rep.hoeffding_bound),
            "within_bound": within,
            "required_samples": needed,
            "beta": json_num(cfg.beta),
        })),
        OutputFormat::Csv => {
            let header = "p,lambda_plus,lambda_minus,C,exact,mean,std_error,samples,seed,hoeffding_bound,within_bound,required_samples";
            format!(
                "{header}\n{},{},{},{},{},{},{},{samples},{seed},{},{within},{needed}\n",
                fmt_sig(p),
                fmt_sig(vop.lambda_plus()),
                fmt_sig(vop.lambda_minus()),
                fmt_sig(c),
                fmt_sig(exact),
                fmt_sig(rep.mean),
                fmt_sig(rep.std_error),
                fmt_sig(rep.hoeffding_bound),
            )
        }
    };
    emit(&sink, &text)?;
    Ok(if exact_ok && within { EXIT_OK } else { EXIT_FAILURE })
}

fn selftest(a: SelftestArgs, file: &FileConfig) -> CliResult {
    let mut opts = SelftestOptions::default();
    if let Some(s) = &a.criteria {
        let ids: Vec<u8> = s
            .split(',')
            .map(|x| x.trim().parse::<u8>().map_err(|e| format!("bad criterion `{x}`: {e}")))
            .collect::<Result<_, _>>()
            .map_err(CliError::Usage)?;
        if let Some(bad) = ids.iter().find(|i| !ALL_CRITERIA.contains(i)) {
            return Err(CliError::Usage(format!("no criterion {bad}")));
        }
        opts.criteria = ids;
    }
    if let Some(n) = a.samples.or(file.samples) {
        if n < 2 {
            return Err(CliError::Usage("--samples must be at least 2".into()));
        }
        opts.variance_shots = n;
    }
    if let Some(s) = a.seed.or(file.seed) {
        opts.seed = s;
    }
    if !(a.tolerance_scale >= 0.0) {
        return Err(CliError::Usage("tolerance scale must be nonnegative".into()));
    }
    opts.tolerance_scale = a.tolerance_scale;
    let report = run_selftest(&opts);
    print!("{}", report.render());
    Ok(if report.failed(a.strict) { EXIT_FAILURE } else { EXIT_OK })
}
