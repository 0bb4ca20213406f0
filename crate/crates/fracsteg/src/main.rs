use std::io;
use std::process::ExitCode;

use clap::Parser;
use fracsteg::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr().lock();
    match run(cli, &mut stdout, &mut stderr) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category().as_str());
            ExitCode::from(e.exit_code())
        }
    }
}
