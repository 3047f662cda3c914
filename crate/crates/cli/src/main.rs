use std::io::Write;
use std::process::ExitCode;

use capmatch_cli::{run, Cli, LIMITS_ENV};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = std::env::var(LIMITS_ENV).ok();
    match run(&cli, limits.as_deref()) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("capmatch: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
