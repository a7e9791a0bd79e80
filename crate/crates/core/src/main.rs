use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use brimcalc::invariants::FitConfig;
use brimcalc::runner::{self, EXIT_INPUT};
use brimcalc::script::parse_script;
use brimcalc::sweep::{self, CheckKind, SweepConfig};

#[derive(Parser)]
#[command(
    name = "brimcalc",
    version,
    about = "Buchsbaum-Rim and fiber multiplicities of direct sums of monomial ideals"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct FitArgs {
    /// Initial window size for polynomial fitting
    #[arg(long = "nmax")]
    n_max: Option<usize>,
    /// Extra points required to agree with a fitted polynomial
    #[arg(long, default_value_t = 3)]
    verify_window: usize,
    /// Largest s tried when testing J I^s = I^{s+1}
    #[arg(long = "smax", default_value_t = 20)]
    s_max: usize,
}

impl FitArgs {
    fn config(&self) -> FitConfig {
        FitConfig {
            n_max: self.n_max,
            verify_window: self.verify_window,
            s_max: self.s_max,
            ..FitConfig::default()
        }
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Emit a single JSON document
    #[arg(long)]
    json: bool,
    /// Write output to FILE instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    /// Two copies of (t^7, t^17, t^33) over semigroup(7, 15, 17, 33)
    Paper,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a .brim script
    Run {
        file: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check seeded random instances
    Sweep {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Checks to run (repeatable)
        #[arg(long = "check", value_enum, default_values_t = [CheckKind::Vasconcelos])]
        checks: Vec<CheckKind>,
        #[arg(long, default_value_t = 4)]
        max_exp: u32,
        #[arg(long, default_value_t = 4)]
        max_gens: usize,
        /// Draw reduction pairs (I, J) and build I^u (+) J^v
        #[arg(long)]
        mixed: bool,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a built-in example script
    Example {
        #[arg(value_enum)]
        name: Example,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn emit(output: &OutputArgs, doc: &Value, text: impl FnOnce(&Value) -> String) -> Result<(), i32> {
    let body = if output.json {
        serde_json::to_string_pretty(doc).expect("serializes") + "\n"
    } else {
        text(doc)
    };
    match &output.out {
        Some(path) => std::fs::write(path, body).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            EXIT_INPUT
        }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run_text(text: &str, fit: &FitArgs, output: &OutputArgs) -> i32 {
    match parse_script(text) {
        Ok(script) => {
            let outcome = runner::run_script(&script, &fit.config());
            match emit(output, &outcome.document, runner::render_text) {
                Ok(()) => outcome.exit_code,
                Err(code) => code,
            }
        }
        Err(e) => {
            if output.json {
                let _ = emit(output, &runner::parse_error_document(&e), |_| String::new());
            }
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Cmd::Run { file, fit, output } => match std::fs::read_to_string(&file) {
            Ok(text) => run_text(&text, &fit, &output),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", file.display());
                EXIT_INPUT
            }
        },
        Cmd::Example { name: Example::Paper, fit, output } => {
            run_text(runner::WORKED_EXAMPLE, &fit, &output)
        }
        Cmd::Sweep { dim, rank, count, seed, checks, max_exp, max_gens, mixed, fit, output } => {
            let cfg = SweepConfig {
                dim,
                rank,
                count,
                seed,
                max_exp,
                max_gens,
                checks,
                mixed,
                fit: fit.config(),
            };
            let outcome = sweep::run_sweep(&cfg);
            match emit(&output, &outcome.document, sweep::render_text) {
                Ok(()) => outcome.exit_code,
                Err(code) => code,
            }
        }
    };
    ExitCode::from(code as u8)
}
