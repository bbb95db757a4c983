use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use bosy::emit::{emit, Target};
use bosy::search::{run_dual, run_single, Backend, Outcome, SearchOptions, SearchStrategy, StrategyKind};
use bosy::specio::parse_spec;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BackendArg {
    Sat,
    Qbf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Linear,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlayerArg {
    System,
    Environment,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    Aiger,
    Smv,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptimizeArg {
    None,
    All,
}

/// Bounded synthesis of reactive controllers from LTL specifications.
#[derive(Debug, Parser)]
#[command(name = "bosy", version)]
struct Cli {
    /// JSON specification file, or `-` for standard input
    spec: String,

    #[arg(long, value_enum, default_value_t = BackendArg::Qbf)]
    backend: BackendArg,

    #[arg(long, value_enum, default_value_t = StrategyArg::Exponential)]
    strategy: StrategyArg,

    /// Which side to search for; `both` races system and environment
    #[arg(long, value_enum, default_value_t = PlayerArg::Both)]
    player: PlayerArg,

    /// Print the synthesized implementation after the verdict
    #[arg(long)]
    synthesize: bool,

    #[arg(long, value_enum, default_value_t = TargetArg::Aiger)]
    target: TargetArg,

    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    min_bound: u64,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_bound: Option<u64>,

    /// SAT solver command; `{file}` is replaced by the DIMACS path
    #[arg(long, env = "BOSY_SAT_CMD")]
    external_sat: Option<String>,

    /// QBF solver command; `{file}` is replaced by the QDIMACS path
    #[arg(long, env = "BOSY_QBF_CMD")]
    external_qbf: Option<String>,

    /// LTL-to-automaton command printing HOA; `{formula}` is replaced by the formula
    #[arg(long, env = "BOSY_TRANSLATOR_CMD")]
    translator: Option<String>,

    #[arg(long, value_enum, default_value_t = OptimizeArg::All)]
    optimize: OptimizeArg,
}

const EXIT_BAD_FLAGS: u8 = 3;
const EXIT_ERROR: u8 = 4;

fn read_spec(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn run(cli: &Cli) -> bosy::Result<ExitCode> {
    let problem = parse_spec(&read_spec(&cli.spec)?)?;
    let kind = match cli.strategy {
        StrategyArg::Linear => StrategyKind::Linear,
        StrategyArg::Exponential => StrategyKind::Exponential,
    };
    let options = SearchOptions {
        strategy: SearchStrategy {
            kind,
            initial: cli.min_bound as usize,
            cap: cli.max_bound.map(|b| b as usize),
        },
        backend: match cli.backend {
            BackendArg::Sat => Backend::Sat,
            BackendArg::Qbf => Backend::Qbf,
        },
        optimize: cli.optimize == OptimizeArg::All,
        external_sat: cli.external_sat.clone(),
        external_qbf: cli.external_qbf.clone(),
        translator: cli.translator.clone(),
        solver_timeout: None,
    };
    let verdict = match cli.player {
        PlayerArg::Both => run_dual(&problem, &options)?,
        PlayerArg::System => run_single(&problem, &options)?,
        PlayerArg::Environment => run_single(&problem.dualize()?, &options)?,
    };
    let (word, code) = match verdict.outcome {
        Outcome::Realizable => ("REALIZABLE", 0),
        Outcome::Unrealizable => ("UNREALIZABLE", 1),
        Outcome::Unknown => ("UNKNOWN", 2),
    };
    println!("{word}");
    if let (true, Some(machine)) = (cli.synthesize, &verdict.machine) {
        let target = match cli.target {
            TargetArg::Aiger => Target::Aiger,
            TargetArg::Smv => Target::Smv,
            TargetArg::Dot => Target::Dot,
        };
        print!("{}", emit(machine, target));
    }
    Ok(ExitCode::from(code))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_BAD_FLAGS) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(max) = cli.max_bound {
        if max < cli.min_bound {
            eprintln!("error: --max-bound must not be smaller than --min-bound");
            return ExitCode::from(EXIT_BAD_FLAGS);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
