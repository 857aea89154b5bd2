use std::io::IsTerminal;
use std::process::ExitCode;

use clap::Parser;
use rankdyn_cli::{run, Cli};

fn use_color() -> bool {
    std::env::var_os("RANKDYN_NO_COLOR").is_none() && std::io::stderr().is_terminal()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not errors
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let label = if use_color() { "\x1b[1;31merror:\x1b[0m" } else { "error:" };
            eprintln!("{label} {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
