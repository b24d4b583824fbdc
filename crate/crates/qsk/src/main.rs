use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qsk::cli::run(std::env::args_os()))
}
