use std::process::ExitCode;

use clap::{Parser, Subcommand};
use surfclass::report::{run, Options, Section};

#[derive(Parser)]
#[command(name = "surfclass", version, about = "Replays the classification and checks every number")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of a text table.
    #[arg(long, global = true)]
    json: bool,
    /// Coefficient bound for the generator search.
    #[arg(long, global = true, default_value_t = 3)]
    bound: i64,
    /// Test hook: corrupt the expected value of one check.
    #[arg(long, global = true, value_name = "CHECK_ID")]
    perturb: Option<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Im h tables, hermitian matrices, Pfaffians and intersection numbers.
    Tables,
    /// Classification of the 2-torsion characters.
    Characters,
    /// Action on the 16 square roots and its orbits.
    Orbits,
    /// Numerical invariants of the surfaces.
    Invariants,
    /// Bounded search for the automorphism generators.
    SearchAut,
    /// All of the above.
    VerifyAll,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let sections: Vec<Section> = match cli.command {
        Command::Tables => vec![Section::Tables],
        Command::Characters => vec![Section::Characters],
        Command::Orbits => vec![Section::Orbits],
        Command::Invariants => vec![Section::Invariants],
        Command::SearchAut => vec![Section::SearchAut],
        Command::VerifyAll => Section::ALL.to_vec(),
    };
    let opts = Options { bound: cli.bound, perturb: cli.perturb };
    match run(&sections, &opts) {
        Ok(r) => {
            if cli.json {
                println!("{}", r.to_json());
            } else {
                print!("{}", r.to_text());
            }
            if r.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
