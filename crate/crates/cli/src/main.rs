use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use contracta_cli::commands::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = execute(&cli);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(report.to_json().as_bytes()).is_err() {
        return ExitCode::from(1);
    }
    if let Some(error) = &report.error {
        eprintln!("contracta: {error}");
    }
    ExitCode::from(report.exit_code())
}
