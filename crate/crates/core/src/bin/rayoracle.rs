use std::process::ExitCode;

fn main() -> ExitCode {
    rayoracle::cli::main()
}
