//! Command-line front end: closed-form capacity calculators, canonical
//! decompositions, panel-data emission, and the verification suites.
//!
//! The front end runs single-threaded and delegates parallelism to the
//! verification ops through rayon; `--threads` (or the `BCL_THREADS`
//! environment variable, which wins when both are set) caps the worker
//! count. Identical invocations produce byte-identical output, except
//! for the `elapsed_seconds` field of JSON verification reports.
//!
//! Exit codes: 0 success (all checks passed), 1 invalid parameters or
//! I/O failure, 2 verification failure (a margin breached its
//! tolerance), 3 numerical failure (truncation budget exceeded or a
//! singular reference).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bgc::capacity::{holevo_capacity, max_output_entropy, min_output_entropy};
use bgc::channel::Channel;
use bgc::error::{Error, Result};
use bgc::plot::{render_panel, Panel};
use bgc::report::{format_float, reports_to_json, VerificationReport};
use bgc::verify::{
    run_all, verify_additivity_two_copies, verify_conjecture, verify_entropy_chain_suite,
    verify_eof, verify_mixing, verify_relative_entropy_bound, verify_spectra,
    verify_transposition, AdditivityParams, ChainParams, ConjectureParams, EofParams,
    MixingParams, RelativeEntropyParams, SpectraParams, SuiteConfig, TranspositionParams,
};

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Single-mode bosonic Gaussian channels: capacities, decompositions,
/// plot data, and a numerical verification suite.
#[derive(Parser)]
#[command(name = "bgc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for stdout results
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for parallel suites (default: one per core); the
    /// BCL_THREADS environment variable overrides this flag
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form capacity and output entropies of one channel
    Capacity(CapacityArgs),
    /// Factor one channel into quantum-limited loss then amplification
    Decompose(ChannelArgs),
    /// Emit the data table of one plot panel as CSV
    Plot(PlotArgs),
    /// Run verification suites and report worst margins
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// Beam splitter into a thermal environment (--eta, --N)
    Thermal,
    /// Classical additive Gaussian noise (--n)
    Addnoise,
    /// Phase-preserving amplifier (--kappa, --N)
    Amp,
    /// Phase-conjugating amplifier (--kappa, --N)
    ContraAmp,
}

#[derive(Args)]
struct ChannelArgs {
    /// Channel family
    #[arg(long, value_enum)]
    channel: FamilyArg,

    /// Transmissivity in [0, 1] (thermal only)
    #[arg(long)]
    eta: Option<f64>,

    /// Environment mean photon number, >= 0, default 0 (thermal, amp,
    /// contra-amp)
    #[arg(long = "N", value_name = "N")]
    n_env: Option<f64>,

    /// Added noise photons, >= 0 (addnoise only)
    #[arg(long)]
    n: Option<f64>,

    /// Gain, >= 1 (amp and contra-amp only)
    #[arg(long)]
    kappa: Option<f64>,
}

#[derive(Args)]
struct CapacityArgs {
    #[command(flatten)]
    channel: ChannelArgs,

    /// Mean input photon number per use, >= 0
    #[arg(long)]
    energy: f64,
}

#[derive(Args)]
struct PlotArgs {
    /// Panel to emit: fig2a, fig2b, fig2c, or fig2d
    #[arg(long)]
    panel: Panel,

    /// Output file, written atomically; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    /// Every suite at desk-scale defaults with derived per-suite seeds
    All,
    /// Entropy-floor search over random and grid states
    Conjecture,
    /// Conjugated contravariant output vs composite channel, state by state
    Transposition,
    /// Output-spectra agreement of the two amplifier marginals
    Spectra,
    /// Iterated loss contracts everything to the vacuum
    Mixing,
    /// Amplifier entropy chain inequality and its large-q limit
    Chain,
    /// Joint output entropy of two channel copies vs twice the floor
    Additivity,
    /// Entanglement-of-formation facts for the amplifier dilation
    Eof,
    /// Relative-entropy lower bound on output entropy
    Relent,
}

impl SuiteArg {
    fn name(self) -> &'static str {
        match self {
            SuiteArg::All => "all",
            SuiteArg::Conjecture => "conjecture",
            SuiteArg::Transposition => "transposition",
            SuiteArg::Spectra => "spectra",
            SuiteArg::Mixing => "mixing",
            SuiteArg::Chain => "chain",
            SuiteArg::Additivity => "additivity",
            SuiteArg::Eof => "eof",
            SuiteArg::Relent => "relent",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,

    /// Master seed; all sampled states derive from it deterministically
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Gain parameter (all suites except mixing; suite-specific default,
    /// e.g. 1.5 for conjecture, 2 for transposition and eof)
    #[arg(long)]
    kappa: Option<f64>,

    /// Loss transmissivity in (0, 1) (mixing only, default 0.7)
    #[arg(long)]
    eta: Option<f64>,

    /// Environment mean photon number (eof only, default 1)
    #[arg(long = "N", value_name = "N")]
    n_env: Option<f64>,

    /// Input Fock dimension (suite-specific default, e.g. 16 for
    /// conjecture, 40 for transposition)
    #[arg(long)]
    dim: Option<usize>,

    /// Random-sample count (suite-specific default, e.g. 1000 for
    /// conjecture, 500 for additivity)
    #[arg(long)]
    samples: Option<usize>,

    /// Loss iterations (mixing only, default 40)
    #[arg(long)]
    q_max: Option<u32>,

    /// Worst-margin tolerance; replaces the suite default (for --suite
    /// all, replaces every suite's default)
    #[arg(long)]
    tolerance: Option<f64>,

    /// Truncation budget for Fock-space tails
    #[arg(long, default_value_t = 1e-9)]
    budget: f64,

    /// Also write the JSON report array to this file (atomic)
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::TruncationBudgetExceeded { .. }
        | Error::SingularReference(_)
        | Error::Eigensolver(_)
        | Error::NonHermitian(_) => EXIT_NUMERICAL,
        _ => EXIT_INVALID,
    }
}

fn run(cli: &Cli) -> Result<u8> {
    configure_threads(cli.threads)?;
    match &cli.command {
        Command::Capacity(args) => {
            cmd_capacity(args, cli.format)?;
            Ok(EXIT_OK)
        }
        Command::Decompose(args) => {
            cmd_decompose(args, cli.format)?;
            Ok(EXIT_OK)
        }
        Command::Plot(args) => {
            cmd_plot(args)?;
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let reports = run_verify(args)?;
            let all_passed = emit_verify(&reports, cli.format, args.report.as_deref())?;
            Ok(if all_passed { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

/// Thread cap: BCL_THREADS wins over --threads; unset means rayon's
/// default (one worker per core). Margins are exact min-reductions, so
/// the worker count never changes results, only wall time.
fn configure_threads(flag: Option<usize>) -> Result<()> {
    let count = match std::env::var("BCL_THREADS") {
        Ok(raw) => Some(raw.trim().parse::<usize>().map_err(|_| {
            Error::InvalidParameter(format!("BCL_THREADS must be a positive integer, got {raw:?}"))
        })?),
        Err(std::env::VarError::NotPresent) => flag,
        Err(std::env::VarError::NotUnicode(_)) => {
            return Err(Error::InvalidParameter("BCL_THREADS is not valid unicode".into()))
        }
    };
    if let Some(n) = count {
        if n == 0 {
            return Err(Error::InvalidParameter("thread count must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn refuse<T>(opt: &Option<T>, flag: &str, suite: SuiteArg) -> Result<()> {
    if opt.is_some() {
        return Err(Error::InvalidParameter(format!(
            "--{flag} is not used by suite '{}'",
            suite.name()
        )));
    }
    Ok(())
}

fn build_channel(args: &ChannelArgs) -> Result<Channel> {
    let require = |opt: Option<f64>, flag: &str, family: &str| {
        opt.ok_or_else(|| {
            Error::InvalidParameter(format!("--{flag} is required for --channel {family}"))
        })
    };
    match args.channel {
        FamilyArg::Thermal => {
            refuse_channel_flag(&args.n, "n", "thermal")?;
            refuse_channel_flag(&args.kappa, "kappa", "thermal")?;
            Channel::thermal(require(args.eta, "eta", "thermal")?, args.n_env.unwrap_or(0.0))
        }
        FamilyArg::Addnoise => {
            refuse_channel_flag(&args.eta, "eta", "addnoise")?;
            refuse_channel_flag(&args.n_env, "N", "addnoise")?;
            refuse_channel_flag(&args.kappa, "kappa", "addnoise")?;
            Channel::additive_noise(require(args.n, "n", "addnoise")?)
        }
        FamilyArg::Amp => {
            refuse_channel_flag(&args.eta, "eta", "amp")?;
            refuse_channel_flag(&args.n, "n", "amp")?;
            Channel::amplifier(require(args.kappa, "kappa", "amp")?, args.n_env.unwrap_or(0.0))
        }
        FamilyArg::ContraAmp => {
            refuse_channel_flag(&args.eta, "eta", "contra-amp")?;
            refuse_channel_flag(&args.n, "n", "contra-amp")?;
            Channel::contra_amplifier(
                require(args.kappa, "kappa", "contra-amp")?,
                args.n_env.unwrap_or(0.0),
            )
        }
    }
}

fn refuse_channel_flag(opt: &Option<f64>, flag: &str, family: &str) -> Result<()> {
    if opt.is_some() {
        return Err(Error::InvalidParameter(format!(
            "--{flag} does not apply to --channel {family}"
        )));
    }
    Ok(())
}

fn family_name(channel: &Channel) -> &'static str {
    match channel {
        Channel::Thermal { .. } => "thermal",
        Channel::AdditiveNoise { .. } => "addnoise",
        Channel::Amplifier { .. } => "amp",
        Channel::ContraAmplifier { .. } => "contra-amp",
    }
}

fn channel_text(channel: &Channel) -> String {
    match channel {
        Channel::Thermal { eta, n_env } => format!("thermal(eta={eta}, N={n_env})"),
        Channel::AdditiveNoise { n } => format!("addnoise(n={n})"),
        Channel::Amplifier { kappa, n_env } => format!("amp(kappa={kappa}, N={n_env})"),
        Channel::ContraAmplifier { kappa, n_env } => {
            format!("contra-amp(kappa={kappa}, N={n_env})")
        }
    }
}

/// JSON fragments for the family-specific parameters, in a fixed order.
fn channel_json_params(channel: &Channel) -> String {
    match channel {
        Channel::Thermal { eta, n_env } => {
            format!("\"eta\":{},\"N\":{}", format_float(*eta), format_float(*n_env))
        }
        Channel::AdditiveNoise { n } => format!("\"n\":{}", format_float(*n)),
        Channel::Amplifier { kappa, n_env } | Channel::ContraAmplifier { kappa, n_env } => {
            format!("\"kappa\":{},\"N\":{}", format_float(*kappa), format_float(*n_env))
        }
    }
}

/// CSV cells `eta,N,n,kappa` with blanks for parameters the family lacks.
fn channel_csv_cells(channel: &Channel) -> String {
    let cell = |v: Option<f64>| v.map(format_float).unwrap_or_default();
    let (eta, n_env, n, kappa) = match channel {
        Channel::Thermal { eta, n_env } => (Some(*eta), Some(*n_env), None, None),
        Channel::AdditiveNoise { n } => (None, None, Some(*n), None),
        Channel::Amplifier { kappa, n_env } | Channel::ContraAmplifier { kappa, n_env } => {
            (None, Some(*n_env), None, Some(*kappa))
        }
    };
    format!("{},{},{},{}", cell(eta), cell(n_env), cell(n), cell(kappa))
}

fn cmd_capacity(args: &CapacityArgs, format: Format) -> Result<()> {
    let channel = build_channel(&args.channel)?;
    let energy = args.energy;
    let capacity = holevo_capacity(&channel, energy)?;
    let s_min = min_output_entropy(&channel);
    let s_max = max_output_entropy(&channel, energy)?;
    match format {
        Format::Text => emit(&format!(
            "family                  = {}\n\
             energy                  = {energy}\n\
             capacity_bits           = {capacity}\n\
             min_output_entropy_bits = {s_min}\n\
             max_output_entropy_bits = {s_max}\n",
            channel_text(&channel),
        )),
        Format::Json => emit(&format!(
            "{{\"family\":\"{}\",{},\"energy\":{},\"capacity_bits\":{},\
             \"min_output_entropy_bits\":{},\"max_output_entropy_bits\":{}}}\n",
            family_name(&channel),
            channel_json_params(&channel),
            format_float(energy),
            format_float(capacity),
            format_float(s_min),
            format_float(s_max),
        )),
        Format::Csv => emit(&format!(
            "family,eta,N,n,kappa,energy,capacity_bits,\
             min_output_entropy_bits,max_output_entropy_bits\n\
             {},{},{},{},{},{}\n",
            family_name(&channel),
            channel_csv_cells(&channel),
            format_float(energy),
            format_float(capacity),
            format_float(s_min),
            format_float(s_max),
        )),
    }
}

fn cmd_decompose(args: &ChannelArgs, format: Format) -> Result<()> {
    let channel = build_channel(args)?;
    let d = channel.canonical().decompose()?;
    match format {
        Format::Text => emit(&format!(
            "family      = {}\n\
             eta0        = {}\n\
             kappa0      = {}\n\
             conjugating = {}\n",
            channel_text(&channel),
            d.eta0,
            d.kappa0,
            d.conjugating,
        )),
        Format::Json => emit(&format!(
            "{{\"family\":\"{}\",{},\"eta0\":{},\"kappa0\":{},\"conjugating\":{}}}\n",
            family_name(&channel),
            channel_json_params(&channel),
            format_float(d.eta0),
            format_float(d.kappa0),
            d.conjugating,
        )),
        Format::Csv => emit(&format!(
            "family,eta,N,n,kappa,eta0,kappa0,conjugating\n{},{},{},{},{}\n",
            family_name(&channel),
            channel_csv_cells(&channel),
            format_float(d.eta0),
            format_float(d.kappa0),
            d.conjugating,
        )),
    }
}

fn cmd_plot(args: &PlotArgs) -> Result<()> {
    let csv = render_panel(args.panel)?;
    match &args.out {
        None => emit(&csv),
        Some(path) => write_atomic(path, &csv),
    }
}

/// Single funnel for stdout. A consumer that stops reading early (say,
/// `plot` piped into `head`) closes the pipe; that ends the process quietly
/// with success instead of a panic, since the truncation was the consumer's
/// choice. Real write failures surface as I/O errors.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {
            std::process::exit(i32::from(EXIT_OK))
        }
        other => other.map_err(Error::from),
    }
}

/// Write through a temp file in the target directory plus rename, so a
/// crash or concurrent reader never sees a partial file.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{}.tmp{}", name, std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::from(e)
    })
}

fn run_verify(args: &VerifyArgs) -> Result<Vec<VerificationReport>> {
    let suite = args.suite;
    match suite {
        SuiteArg::All => {
            refuse(&args.kappa, "kappa", suite)?;
            refuse(&args.eta, "eta", suite)?;
            refuse(&args.n_env, "N", suite)?;
            refuse(&args.dim, "dim", suite)?;
            refuse(&args.samples, "samples", suite)?;
            refuse(&args.q_max, "q-max", suite)?;
            run_all(&SuiteConfig {
                master_seed: args.seed,
                budget: args.budget,
                tolerance_override: args.tolerance,
            })
        }
        SuiteArg::Conjecture => {
            refuse(&args.eta, "eta", suite)?;
            refuse(&args.n_env, "N", suite)?;
            refuse(&args.q_max, "q-max", suite)?;
            let mut p = ConjectureParams { seed: args.seed, budget: args.budget, ..Default::default() };
            if let Some(v) = args.kappa {
                p.kappa = v;
            }
            if let Some(v) = args.dim {
                p.dim_in = v;
            }
            if let Some(v) = args.samples {
                p.samples = v;
            }
            if let Some(v) = args.tolerance {
                p.tolerance = v;
            }
            Ok(vec![verify_conjecture(&p)?])
        }
        SuiteArg::Transposition => {
            refuse(&args.eta, "eta", suite)?;
            refuse(&args.n_env, "N", suite)?;
            refuse(&args.q_max, "q-max", suite)?;
            let mut p =
                TranspositionParams { seed: args.seed, budget: args.budget, ..Default::default() };
            if let Some(v) = args.kappa {
                p.kappa0 = v;
            }
            if let Some(v) = args.dim {
                p.dim = v;
            }
            if let Some(v) = args.samples {
                p.haar_inputs = v;
            }
            if let Some(v) = args.tolerance {
                p.tolerance = v;
            }
            Ok(vec![verify_transposition(&p)?])
        }
        SuiteArg::Spectra => {
            refuse(&args.eta, "eta", suite)?;
            refuse(&args.n_env, "N", suite)?;
            refuse(&args.q_max, "q-max", suite)?;
            let mut p = SpectraParams { seed: args.seed, budget: args.budget, ..Default::default() };
            if let Some(v) = args.kappa {
                p.kappa = v;
            }
            if let Some(v) = args.dim {
                p.dim_in = v;
            }
            if let Some(v) = args.samples {
                p.samples = v;
            }
            if let Some(v) = args.tolerance {
                p.tolerance = v;
            }
            Ok(vec![verify_spectra(&p)?])
        }
        SuiteArg::Mixing => {
            refuse(&args.kappa, "kappa", suite)?;
            refuse(&args.n_env, "N", suite)?;
            refuse(&args.samples, "samples", suite)?;
            let mut p = MixingParams { seed: args.seed, budget: args.budget, ..Default::default() };
            if let Some(v) = args.eta {
                p.eta = v;
            }
            if let Some(v) = args.dim {
                p.dim = v;
            }
            if let Some(v) = args.q_max {
                p.q_max = v;
            }
            if let Some(v) = args.tolerance {
                p.tolerance = v;
            }
            Ok(vec![verify_mixing(&p)?])
        }
        SuiteArg::Chain => {
            refuse(&args.eta, "eta", suite)?;
            refuse(&args.n_env, "N", suite)?;
            refuse(&args.q_max, "q-max", suite)?;
            let mut p = ChainParams { seed: args.seed, budget: args.budget, ..Default::default() };
            if let Some(v) = args.kappa {
                p.kappa = v;
            }
            if let Some(v) = args.dim {
                p.dim = v;
            }
            if let Some(v) = args.samples {
                p.samples = v;
            }
            if let Some(v) = args.tolerance {
                p.tolerance = v;
            }
            Ok(vec![verify_entropy_chain_suite(&p)?])
        }
        SuiteArg::Additivity => {
            refuse(&args.eta, "eta", suite)?;
            refuse(&args.n_env, "N", suite)?;
            refuse(&args.q_max, "q-max", suite)?;
            let mut p =
                AdditivityParams { seed: args.seed, budget: args.budget, ..Default::default() };
            if let Some(v) = args.kappa {
                p.kappa = v;
            }
            if let Some(v) = args.dim {
                p.dim_in = v;
            }
            if let Some(v) = args.samples {
                p.samples = v;
            }
            if let Some(v) = args.tolerance {
                p.tolerance = v;
            }
            Ok(vec![verify_additivity_two_copies(&p)?])
        }
        SuiteArg::Eof => {
            refuse(&args.eta, "eta", suite)?;
            refuse(&args.samples, "samples", suite)?;
            refuse(&args.q_max, "q-max", suite)?;
            let mut p = EofParams { budget: args.budget, ..Default::default() };
            if let Some(v) = args.kappa {
                p.kappa = v;
            }
            if let Some(v) = args.n_env {
                p.n_env = v;
            }
            if let Some(v) = args.dim {
                p.dim = v;
            }
            if let Some(v) = args.tolerance {
                p.tolerance = v;
            }
            Ok(vec![verify_eof(&p)?])
        }
        SuiteArg::Relent => {
            refuse(&args.eta, "eta", suite)?;
            refuse(&args.n_env, "N", suite)?;
            refuse(&args.q_max, "q-max", suite)?;
            let mut p =
                RelativeEntropyParams { seed: args.seed, budget: args.budget, ..Default::default() };
            if let Some(v) = args.kappa {
                p.kappa = v;
            }
            if let Some(v) = args.dim {
                p.dim = v;
            }
            if let Some(v) = args.samples {
                p.samples = v;
            }
            if let Some(v) = args.tolerance {
                p.tolerance = v;
            }
            Ok(vec![verify_relative_entropy_bound(&p)?])
        }
    }
}

fn emit_verify(
    reports: &[VerificationReport],
    format: Format,
    report_path: Option<&Path>,
) -> Result<bool> {
    // The report file is the durable artifact: write it before stdout so a
    // dead pipe cannot lose it.
    if let Some(path) = report_path {
        write_atomic(path, &reports_to_json(reports))?;
    }
    match format {
        Format::Text => {
            let mut text = String::new();
            for r in reports {
                text.push_str(&r.summary_line());
                text.push('\n');
            }
            emit(&text)?;
        }
        Format::Json => emit(&reports_to_json(reports))?,
        Format::Csv => {
            let mut text =
                String::from("test,passed,worst_margin,tolerance,truncation_budget,seed,samples\n");
            for r in reports {
                use std::fmt::Write;
                let _ = writeln!(
                    text,
                    "{},{},{},{},{},{},{}",
                    r.test,
                    r.passed,
                    format_float(r.worst_margin),
                    format_float(r.tolerance),
                    format_float(r.truncation_budget),
                    r.seed,
                    r.samples,
                );
            }
            emit(&text)?;
        }
    }
    Ok(reports.iter().all(|r| r.passed))
}
