use std::process::ExitCode;

use clap::Parser;

use rindler_eqp::cli::{run, Cli, CliError, EXIT_VERIFICATION};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            print!("{}", output.text);
            for f in &output.files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Verification(table)) => {
            print!("{table}");
            ExitCode::from(EXIT_VERIFICATION)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
