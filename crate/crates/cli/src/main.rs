use std::process::ExitCode;

fn main() -> ExitCode {
    staging_cli::main_with(std::env::args_os())
}
