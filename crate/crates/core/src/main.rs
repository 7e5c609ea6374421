use std::process::ExitCode;

fn main() -> ExitCode {
    littlewood::cli::run(std::env::args_os())
}
