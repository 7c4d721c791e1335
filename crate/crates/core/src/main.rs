use std::process::ExitCode;

fn main() -> ExitCode {
    cantor_capacity::cli::run(std::env::args_os())
}
