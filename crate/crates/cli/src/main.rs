use std::process::ExitCode;

fn main() -> ExitCode {
    match rfunfold_cli::run(std::env::args_os()) {
        Ok(()) | Err(rfunfold_cli::CliError::Help) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
