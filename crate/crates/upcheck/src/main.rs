use std::process::ExitCode;

fn main() -> ExitCode {
    upcheck::cli::main()
}
