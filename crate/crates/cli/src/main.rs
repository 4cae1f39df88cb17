//! `opcalc`: ordering rules, grid kernels, weak values and dynamics from the
//! command line.
//!
//! Exit codes: 0 success, 2 parse or validation error, 3 numerical
//! precondition or failed check, 4 I/O.

mod commands;
mod config;
mod expr;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use opcalc::Error;

use config::{Format, RunConfig, StateSpec};

#[derive(Parser, Debug)]
#[command(name = "opcalc", version, about = "Born-Jordan and Weyl quantization toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the merged configuration to this path before running.
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the kernel builds.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Grid points (power of two, at least 16).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Half-width L of the position box [-L, L).
    #[arg(long, global = true)]
    half_width: Option<f64>,
    #[arg(long, global = true)]
    hbar: Option<f64>,
    /// Gauss-Legendre order of the Born-Jordan tau-average.
    #[arg(long, global = true)]
    order: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantize a polynomial symbol exactly and print its canonical form.
    Quantize {
        expr: Option<String>,
        /// bj, weyl, tau:<rational> or diff (bj minus weyl).
        #[arg(long)]
        rule: Option<String>,
        /// Also print bj minus weyl.
        #[arg(long)]
        show_diff: bool,
    },
    /// Build the grid matrix of a symbol by its configuration-space kernel.
    Kernel {
        #[arg(long)]
        symbol: Option<String>,
        /// bj, weyl, tau:<rational> or both.
        #[arg(long)]
        rule: Option<String>,
    },
    /// Cross-Wigner transform W(pre, post) of two Gaussian states.
    Wigner {
        #[arg(long, allow_hyphen_values = true)]
        pre: Option<StateSpec>,
        /// Defaults to --pre when that is given.
        #[arg(long, allow_hyphen_values = true)]
        post: Option<StateSpec>,
        /// Apply the Born-Jordan filter.
        #[arg(long)]
        bj: bool,
        /// Part written by the CSV output.
        #[arg(long, value_enum, default_value = "real")]
        part: commands::Part,
    },
    /// Born-Jordan and Weyl weak values through both pipelines.
    Weakvalue {
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        pre: Option<StateSpec>,
        #[arg(long, allow_hyphen_values = true)]
        post: Option<StateSpec>,
        /// Draw this many seeded pre/post pairs instead.
        #[arg(long)]
        random_pairs: Option<usize>,
    },
    /// Evolve a state under the Born-Jordan and Weyl Hamiltonians.
    Evolve {
        #[arg(long)]
        symbol: Option<String>,
        /// Initial state.
        #[arg(long, allow_hyphen_values = true)]
        pre: Option<StateSpec>,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Show a symbol whose Born-Jordan quantization vanishes.
    DemoDequantization {
        /// Use a point with q0*p0 = pi*hbar instead.
        #[arg(long, conflicts_with_all = ["q0", "p0"])]
        off_zero_set: bool,
        #[arg(long, requires = "p0", allow_hyphen_values = true)]
        q0: Option<f64>,
        #[arg(long, requires = "q0", allow_hyphen_values = true)]
        p0: Option<f64>,
    },
    /// Run the exact commutation and ordering identities.
    CheckIdentities,
}

impl Command {
    fn merge_into(&self, cfg: &mut RunConfig) {
        let set_symbol = |cfg: &mut RunConfig, s: &Option<String>| {
            if let Some(s) = s {
                cfg.symbol = Some(s.clone());
            }
        };
        match self {
            Command::Quantize { expr, rule, .. } => {
                set_symbol(cfg, expr);
                cfg.rule = rule.clone().or(cfg.rule.take());
            }
            Command::Kernel { symbol, rule } => {
                set_symbol(cfg, symbol);
                cfg.rule = rule.clone().or(cfg.rule.take());
            }
            Command::Wigner { pre, post, .. } => {
                cfg.pre = pre.unwrap_or(cfg.pre);
                cfg.post = post.or(*pre).unwrap_or(cfg.post);
            }
            Command::Weakvalue { symbol, pre, post, .. } => {
                set_symbol(cfg, symbol);
                cfg.pre = pre.unwrap_or(cfg.pre);
                cfg.post = post.unwrap_or(cfg.post);
            }
            Command::Evolve { symbol, pre, horizon, samples } => {
                set_symbol(cfg, symbol);
                cfg.pre = pre.unwrap_or(cfg.pre);
                cfg.horizon = horizon.unwrap_or(cfg.horizon);
                cfg.samples = samples.unwrap_or(cfg.samples);
            }
            Command::DemoDequantization { .. } | Command::CheckIdentities => {}
        }
    }
}

fn resolve(cli: &Cli) -> opcalc::Result<RunConfig> {
    let g = &cli.global;
    let mut cfg = match &g.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.grid.n = g.n.unwrap_or(cfg.grid.n);
    cfg.grid.half_width = g.half_width.unwrap_or(cfg.grid.half_width);
    cfg.grid.hbar = g.hbar.unwrap_or(cfg.grid.hbar);
    cfg.order = g.order.unwrap_or(cfg.order);
    cfg.seed = g.seed.unwrap_or(cfg.seed);
    cfg.format = g.format.or(cfg.format);
    cfg.out = g.out.clone().or(cfg.out.take());
    cfg.threads = g.threads.or(cfg.threads);
    cli.command.merge_into(&mut cfg);
    cfg.grid.spec()?;
    if let Some(path) = &g.save_config {
        cfg.save(path)?;
    }
    Ok(cfg)
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::InvalidGrid(_)
        | Error::GridMismatch { .. }
        | Error::Dimension { .. }
        | Error::QuadratureOrder(_)
        | Error::TauRange(_)
        | Error::OffGrid(_)
        | Error::Invalid(_) => 2,
        Error::NonFiniteSymbol { .. } | Error::NearOrthogonal { .. } | Error::NotHermitian { .. } => 3,
        Error::Io(_) | Error::Csv(_) => 4,
        // A config file that is not valid JSON is a validation error; a
        // failed write surfaces as an I/O error.
        Error::Json(e) if e.is_io() => 4,
        Error::Json(_) => 2,
    }
}

/// Output cut short by a closed pipe, as in `opcalc wigner | head`.
fn broken_pipe(err: &Error) -> bool {
    let io = match err {
        Error::Io(e) => Some(e),
        Error::Csv(e) => match e.kind() {
            csv::ErrorKind::Io(e) => Some(e),
            _ => None,
        },
        _ => None,
    };
    io.is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
}

fn run(cli: &Cli) -> opcalc::Result<commands::Status> {
    let cfg = resolve(cli)?;
    if let Some(threads) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Invalid(format!("cannot start {threads} threads: {e}")))?;
    }
    match &cli.command {
        Command::Quantize { show_diff, .. } => commands::quantize(&cfg, *show_diff),
        Command::Kernel { .. } => commands::kernel(&cfg),
        Command::Wigner { bj, part, .. } => commands::wigner(&cfg, *bj, *part),
        Command::Weakvalue { random_pairs, .. } => commands::weakvalue(&cfg, *random_pairs),
        Command::Evolve { .. } => commands::evolve(&cfg),
        Command::DemoDequantization { off_zero_set, q0, p0 } => {
            let point = q0.zip(*p0);
            commands::demo_dequantization(&cfg, *off_zero_set, point)
        }
        Command::CheckIdentities => commands::check_identities(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(commands::Status::Passed) => ExitCode::SUCCESS,
        Ok(commands::Status::Failed) => ExitCode::from(3),
        Err(err) if broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
