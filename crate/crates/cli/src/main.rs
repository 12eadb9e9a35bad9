use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use expander_forge_cli::{cmd_build, cmd_certify, cmd_spectrum, cmd_table, CliError, JobSpec, Operation};
use expander_forge_core::{Direction, MatchingSeed};

#[derive(Parser)]
#[command(name = "expander-forge", version, about = "Build, perturb and certify LPS Ramanujan graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Perturb {
    Plus,
    Minus,
}

impl From<Perturb> for Direction {
    fn from(p: Perturb) -> Self {
        match p {
            Perturb::Plus => Direction::Plus,
            Perturb::Minus => Direction::Minus,
        }
    }
}

#[derive(clap::Args)]
struct Graph {
    /// Prime p (the graph is (p+1)-regular)
    #[arg(short, long, allow_negative_numbers = true)]
    p: i64,
    /// Prime modulus q
    #[arg(short, long, allow_negative_numbers = true)]
    q: i64,
    /// Add (+F) or remove (-F) a random perfect matching
    #[arg(long, value_enum)]
    perturb: Option<Perturb>,
    /// Seed for the matching
    #[arg(long, default_value_t = 0, requires = "perturb")]
    seed: u64,
}

impl Graph {
    fn spec(&self, op: Operation) -> JobSpec {
        let spec = JobSpec::new(self.p, self.q, op);
        match self.perturb {
            Some(d) => spec.with_perturbation(d.into(), MatchingSeed(self.seed)),
            None => spec,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the edge list and print a construction report
    Build {
        #[command(flatten)]
        graph: Graph,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the grouped spectrum as CSV
    Spectrum {
        #[command(flatten)]
        graph: Graph,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print spectra (or gaps, or top eigenvalues) for several q
    Table {
        #[arg(short, long, allow_negative_numbers = true)]
        p: i64,
        #[arg(short, long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        q: Vec<i64>,
        #[arg(long, value_enum)]
        perturb: Option<Perturb>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        /// Also write the table in long CSV form
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print a JSON gap certificate
    Certify {
        #[command(flatten)]
        graph: Graph,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build { graph, output } => {
            let (edges, report) = cmd_build(&graph.spec(Operation::Build))?;
            std::fs::write(&output, edges)?;
            print!("{report}");
        }
        Command::Spectrum { graph, output } => {
            std::fs::write(&output, cmd_spectrum(&graph.spec(Operation::Spectrum))?)?;
        }
        Command::Table { p, q, perturb, seeds, csv } => {
            let table = cmd_table(p, &q, perturb.map(Into::into), &seeds)?;
            if let Some(path) = csv {
                std::fs::write(path, table.csv())?;
            }
            print!("{}", table.render());
        }
        Command::Certify { graph } => {
            let report = cmd_certify(&graph.spec(Operation::Certify))?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("expander-forge: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
