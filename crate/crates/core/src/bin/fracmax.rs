use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fracmax::cli::{self, CliError, SolveArgs, SweepArgs};
use fracmax::Strategy;

#[derive(Parser)]
#[command(
    name = "fracmax",
    version,
    about = "Maximize a ratio of two functionals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Bisect,
    Dinkelbach,
    Hybrid,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Bisect => Strategy::Bisection,
            StrategyArg::Dinkelbach => Strategy::Dinkelbach,
            StrategyArg::Hybrid => Strategy::Hybrid,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem described by a config file.
    Solve {
        config: PathBuf,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        /// Absolute tolerance on |j(beta)|.
        #[arg(long)]
        tol: Option<f64>,
        /// Print the solution as JSON.
        #[arg(long)]
        json: bool,
        /// Print the parsed config in canonical form and exit.
        #[arg(long)]
        dump_config: bool,
    },
    /// Write `beta,j,ratio_at_xbeta` samples of a beta sweep as CSV.
    Curve(Sweep),
    /// Write the ball asymptote curves `beta,y1,y2,y3,y4` as CSV.
    Asymptote(Sweep),
    /// Run the built-in examples and compare with the reference values.
    Examples {
        /// Comparison tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Args)]
struct Sweep {
    config: PathBuf,
    /// First beta; defaults to min(0, beta_max).
    #[arg(long, allow_hyphen_values = true)]
    from: Option<f64>,
    /// Last beta; defaults to max(0, beta_max).
    #[arg(long, allow_hyphen_values = true)]
    to: Option<f64>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long)]
    out: PathBuf,
}

impl Sweep {
    fn args(&self) -> SweepArgs {
        SweepArgs {
            from: self.from,
            to: self.to,
            samples: self.samples,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Solve {
            config,
            strategy,
            tol,
            json,
            dump_config,
        } => cli::cmd_solve(
            &config,
            &SolveArgs {
                strategy: strategy.map(Into::into),
                tolerance: tol,
                json,
                dump_config,
            },
            &mut out,
        ),
        Command::Curve(s) => cli::cmd_curve(&s.config, &s.args(), &s.out),
        Command::Asymptote(s) => cli::cmd_asymptote(&s.config, &s.args(), &s.out),
        Command::Examples { tol } => cli::cmd_examples(tol, &mut out),
    };
    let _ = out.flush();
    result
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracmax: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
