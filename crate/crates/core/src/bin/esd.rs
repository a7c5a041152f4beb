use std::process::ExitCode;

fn main() -> ExitCode {
    esd_core::cli::main_from(std::env::args_os())
}
