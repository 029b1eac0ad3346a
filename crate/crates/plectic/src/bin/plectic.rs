//! Command-line front end: parse structure files, run solves and verification
//! suites. Exit codes: 0 all checks passed, 1 a check failed, 2 input error.

use clap::{Parser, Subcommand};
use plectic::parse::parse_structure;
use plectic::suites::{run_solve, run_suite, Suite, SuiteOptions};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "plectic", about = "Exact n-plectic Cartan calculus and homotopy Poisson brackets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the fundamental equation or Poisson constraint for a named cotensor.
    Solve {
        /// Structure definition file
        #[arg(long)]
        structure: String,
        /// Name of the cotensor declared in the file
        #[arg(long)]
        name: String,
        /// Which equation to solve: hamilton | constraint
        #[arg(long, default_value = "hamilton")]
        mode: String,
        /// Override the file's polynomial degree bound for the ansatz
        #[arg(long)]
        degree_bound: Option<u32>,
        /// Machine-readable output
        #[arg(long)]
        machine: bool,
    },
    /// Run a verification suite on named plus randomly generated Poisson cotensors.
    Verify {
        #[arg(long)]
        structure: String,
        /// jacobi | leibniz1 | leibniz2 | leibniz3 | rogers | pinfty | all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Bracket arity for the jacobi suite / equation dimension for leibniz1
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Random seed for reproducible reports
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of randomly generated argument tuples per suite
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long)]
        degree_bound: Option<u32>,
        #[arg(long)]
        machine: bool,
    },
}

type Loaded = (plectic::NPlecticStructure, std::collections::BTreeMap<String, plectic::Cotensor>);

fn load(path: &str, degree_bound: Option<u32>) -> Result<Loaded, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let file = parse_structure(&text).map_err(|e| e.to_string())?;
    let (mut s, named) = file.build().map_err(|e| e.to_string())?;
    if let Some(b) = degree_bound {
        s = s.with_degree_bound(b);
    }
    Ok((s, named))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve { structure, name, mode, degree_bound, machine } => {
            let hamilton = match mode.as_str() {
                "hamilton" => true,
                "constraint" => false,
                other => {
                    eprintln!("unknown mode '{other}' (expected hamilton|constraint)");
                    return ExitCode::from(2);
                }
            };
            let (s, named) = match load(&structure, degree_bound) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            match run_solve(&s, &named, &name, hamilton) {
                Ok((text, found)) => {
                    if machine {
                        println!(
                            "{name}\t{}\t{}",
                            if hamilton { "hamilton" } else { "constraint" },
                            if found { "found" } else { "no_solution_within_bound" }
                        );
                    } else {
                        print!("{text}");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Verify { structure, suite, k, seed, trials, degree_bound, machine } => {
            let Some(suite) = Suite::parse(&suite) else {
                eprintln!("unknown suite '{suite}'");
                return ExitCode::from(2);
            };
            let (s, named) = match load(&structure, degree_bound) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            let opts = SuiteOptions { k, seed, trials };
            match run_suite(&s, &named, suite, &opts) {
                Ok(report) => {
                    if machine {
                        print!("{}", report.machine());
                    } else {
                        print!("{}", report.human());
                    }
                    if report.all_passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
