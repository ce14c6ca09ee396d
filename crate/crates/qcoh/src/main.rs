use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcoh_std::compute::{alpha_z, evaluate, MeasureSet, Report, Strategy, Target};
use qcoh_std::sweep::{self, AlphaGrid, Format, Range, SweepSpec};
use qcoh_std::verify::{self, PropertySizes, SuiteReport};
use qcoh_std::{CliError, CliResult};
use qcoh_core::{ChannelKind, OptimizerOptions};

/// Coherence of quantum channels from the alpha-z relative Renyi entropy.
#[derive(Parser)]
#[command(name = "qcoh", version)]
struct Cli {
    /// Master seed of every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Tolerance on gaps to closed-form references.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Compute even when (alpha, z) is outside the known regimes.
    #[arg(long, global = true)]
    allow_outside_regime: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate C or C~ for one channel.
    Compute(ComputeArgs),
    /// Evaluate a measure over a parameter grid and write CSV or JSON.
    Sweep(SweepArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Closed form for C at z = 1, optimizers otherwise.
    Auto,
    Optimizer,
    Oracle,
}

#[derive(Args)]
struct MethodArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Points per direction of the oracle grid.
    #[arg(long, default_value_t = 200)]
    grid: usize,
}

impl MethodArgs {
    fn strategy(&self) -> Strategy {
        match self.method {
            MethodArg::Auto => Strategy::Auto,
            MethodArg::Optimizer => Strategy::Optimizer,
            MethodArg::Oracle => Strategy::Oracle(self.grid),
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    /// Channel kind (phase-flip, depolarizing, amplitude-damping,
    /// isotropic-hadamard, hadamard, s-gate, t-gate, ss, tt, dephasing,
    /// identity) or path to a channel JSON file.
    #[arg(long)]
    channel: String,
    /// Parameter of the named channel (p, or t for isotropic-hadamard).
    #[arg(long, allow_hyphen_values = true)]
    param: Option<f64>,
    /// 1 selects the alpha -> 1 limit.
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    z: f64,
    /// C, Ctilde or both.
    #[arg(long, default_value = "C")]
    measure: String,
    #[command(flatten)]
    method: MethodArgs,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    channel: ChannelKind,
    /// Parameter grid `start:stop:steps` (both ends included).
    #[arg(long, allow_hyphen_values = true)]
    param: Option<String>,
    /// Fixed alpha, or a grid `start:stop:steps`.
    #[arg(long)]
    alpha: String,
    #[arg(long, default_value_t = 1.0)]
    z: f64,
    /// C, Ctilde or both.
    #[arg(long, default_value = "C")]
    measure: String,
    #[command(flatten)]
    method: MethodArgs,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Formulas,
    Properties,
    Table1,
    Conjecture,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Random channels in the conjecture report.
    #[arg(long, default_value_t = 200)]
    channels: usize,
}

fn parse_range(text: &str) -> CliResult<Range> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::Input(format!("'{text}' is not a range start:stop:steps"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start = parts[0].parse().map_err(|_| bad())?;
    let stop = parts[1].parse().map_err(|_| bad())?;
    let steps = parts[2].parse().map_err(|_| bad())?;
    Ok(Range { start, stop, steps })
}

fn options(cli: &Cli) -> OptimizerOptions {
    OptimizerOptions {
        seed: cli.seed,
        allow_outside_regime: cli.allow_outside_regime,
        ..OptimizerOptions::default()
    }
}

fn compute(cli: &Cli, args: &ComputeArgs) -> CliResult<()> {
    let opts = options(cli);
    let target = Target::resolve(&args.channel, args.param)?;
    let params = alpha_z(args.alpha, args.z)?;
    let measures: MeasureSet = args.measure.parse()?;
    let mut reports = Vec::new();
    for m in measures.measures() {
        let r = evaluate(&target.channel, m, params, args.method.strategy(), &opts)?;
        reports.push(Report::new(&target, m, params, &r, cli.tol));
    }
    if args.json {
        let text = if reports.len() == 1 {
            serde_json::to_string_pretty(&reports[0])
        } else {
            serde_json::to_string_pretty(&reports)
        };
        println!("{}", text.expect("plain values serialize"));
    } else {
        let text: Vec<String> = reports.iter().map(Report::to_text).collect();
        print!("{}", text.join("\n"));
    }
    Ok(())
}

fn sweep_cmd(cli: &Cli, args: &SweepArgs) -> CliResult<()> {
    let opts = options(cli);
    let alpha = if args.alpha.contains(':') {
        AlphaGrid::Range(parse_range(&args.alpha)?)
    } else {
        AlphaGrid::Fixed(args.alpha.parse().map_err(|_| CliError::Input(format!("invalid alpha '{}'", args.alpha)))?)
    };
    let spec = SweepSpec {
        kind: args.channel,
        param: args.param.as_deref().map(parse_range).transpose()?,
        alpha,
        z: args.z,
        measures: args.measure.parse()?,
        strategy: args.method.strategy(),
    };
    let format = match args.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    // fail on bad specs and unwritable paths before the work starts
    spec.grid(&opts)?;
    if let Some(path) = &args.out {
        fs::write(path, "").map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    let rows = sweep::run(&spec, &opts)?;
    let text = sweep::render(&spec, &rows, format);
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn verify_cmd(cli: &Cli, args: &VerifyArgs) -> CliResult<()> {
    let opts = options(cli);
    let run = |suite: Suite| -> CliResult<SuiteReport> {
        match suite {
            Suite::Formulas => verify::formulas(&opts, cli.tol),
            Suite::Properties => verify::properties(&opts, PropertySizes::default()),
            Suite::Table1 => verify::table1(&opts),
            Suite::Conjecture => verify::conjecture(&opts, args.channels, cli.tol),
            Suite::All => unreachable!("expanded below"),
        }
    };
    let suites = if args.suite == Suite::All {
        vec![Suite::Formulas, Suite::Properties, Suite::Table1, Suite::Conjecture]
    } else {
        vec![args.suite]
    };
    let mut reports = Vec::new();
    for s in suites {
        let r = run(s)?;
        print!("{}", r.to_text());
        reports.push(r);
    }
    verify::ensure_passed(&reports)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(args) => compute(&cli, args),
        Command::Sweep(args) => sweep_cmd(&cli, args),
        Command::Verify(args) => verify_cmd(&cli, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
