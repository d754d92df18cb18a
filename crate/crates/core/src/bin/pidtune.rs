use std::process::ExitCode;

use clap::Parser;
use pidtune::cli::{run, Cli};
use pidtune::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(&cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::ImproperLoop { .. } = e {
                eprintln!("hint: use a plant with relative degree >= 2, or keep kd = 0");
            }
            ExitCode::FAILURE
        }
    }
}
