use std::process::ExitCode;

fn main() -> ExitCode {
    mbl_superpose::cli::run()
}
