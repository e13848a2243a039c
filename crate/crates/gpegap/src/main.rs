use std::process::ExitCode;

use clap::Parser;
use gpegap::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GPEGAP_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gpegap: {e}");
            e.exit_code()
        }
    }
}
