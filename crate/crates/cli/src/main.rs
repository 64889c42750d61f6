use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(oscsym_cli::run(std::env::args_os()))
}
