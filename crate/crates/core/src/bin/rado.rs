use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = rado_core::cli::configure_workers() {
        eprintln!("error: {e}");
        return ExitCode::from(rado_core::cli::EXIT_USAGE as u8);
    }
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = rado_core::cli::dispatch(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code as u8)
}
