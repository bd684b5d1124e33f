use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use e7lift::commands::{self, LfactorMode, LfactorWhich, Suite};
use e7lift::config::RunConfig;

/// Exact computations around the Jordan-algebra lift: coefficient tables,
/// verification suites, and Euler-factor reports.
#[derive(Parser)]
#[command(name = "e7lift", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Key-value configuration file; explicit flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Newform record (JSON)
    #[arg(long)]
    newform: Option<PathBuf>,
    /// Siegel table file; repeatable. Defaults to *.siegel files in
    /// $E7LIFT_TABLE_DIR when none are given
    #[arg(long)]
    siegel: Vec<PathBuf>,
    /// Determinant bound of the enumeration domain
    #[arg(long)]
    det_bound: Option<i64>,
    /// Trace bound of the enumeration domain
    #[arg(long)]
    trace_bound: Option<i64>,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed of every randomized check
    #[arg(long)]
    seed: Option<u64>,
    /// Precompute bound / declared precision in bits
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate lift coefficients over the bounded enumeration domain
    /// (JSON lines; exit 2 when Siegel entries were missing)
    Lift {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a named property suite with a fixed seed (exit 3 on any failure)
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Randomized checks for the jordan suite
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Print the degree-56 or degree-133 Euler-factor multiset
    Lfactor {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        which: LfactorWhich,
        #[arg(long, value_enum, default_value = "symbolic")]
        mode: LfactorMode,
        /// Prime used by numeric mode
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Satake value used by numeric mode (exact-scalar string)
        #[arg(long)]
        alpha: Option<String>,
    },
    /// CSV table of coefficient constants with their bound check
    CoeffTable {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 100)]
        max_n: u64,
    },
}

fn build_config(common: &CommonArgs) -> Result<RunConfig, String> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_file(path).map_err(|e| e.to_string())?,
        None => RunConfig::default(),
    };
    if let Some(p) = &common.newform {
        cfg.newform = Some(p.clone());
    }
    if !common.siegel.is_empty() {
        cfg.siegel = common.siegel.clone();
    }
    if let Some(v) = common.det_bound {
        cfg.det_bound = Some(v);
    }
    if let Some(v) = common.trace_bound {
        cfg.trace_bound = Some(v);
    }
    if let Some(p) = &common.out {
        cfg.out = Some(p.clone());
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(p) = common.precision {
        cfg.precision = Some(p);
    }
    cfg.apply_table_dir_default();
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are not errors
            if e.use_stderr() {
                eprintln!("{}", e);
                return ExitCode::from(commands::EXIT_CONFIG as u8);
            }
            print!("{}", e);
            return ExitCode::SUCCESS;
        }
    };
    let code = match cli.command {
        Command::Lift { common } => match build_config(&common) {
            Ok(cfg) => commands::cmd_lift(&cfg),
            Err(e) => {
                eprintln!("error: {}", e);
                commands::EXIT_CONFIG
            }
        },
        Command::Verify {
            common,
            suite,
            samples,
        } => match build_config(&common) {
            Ok(cfg) => commands::cmd_verify(&cfg, suite, samples),
            Err(e) => {
                eprintln!("error: {}", e);
                commands::EXIT_CONFIG
            }
        },
        Command::Lfactor {
            common,
            which,
            mode,
            p,
            alpha,
        } => match build_config(&common) {
            Ok(cfg) => commands::cmd_lfactor(&cfg, which, mode, p, alpha.as_deref()),
            Err(e) => {
                eprintln!("error: {}", e);
                commands::EXIT_CONFIG
            }
        },
        Command::CoeffTable { common, max_n } => match build_config(&common) {
            Ok(cfg) => commands::cmd_coeff_table(&cfg, max_n),
            Err(e) => {
                eprintln!("error: {}", e);
                commands::EXIT_CONFIG
            }
        },
    };
    ExitCode::from(code as u8)
}
