use std::process::ExitCode;

fn main() -> ExitCode {
    bellopt::cli::main_with_args(std::env::args_os())
}
