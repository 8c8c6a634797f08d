use std::process::ExitCode;

fn main() -> ExitCode {
    fusion_dual::cli::main_with(std::env::args_os())
}
