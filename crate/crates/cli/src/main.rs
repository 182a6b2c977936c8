use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stderr = io::stderr();
    if let Err(f) = splice_cli::configure_threads(std::env::var("SPLICE_THREADS").ok().as_deref()) {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code as u8);
    }
    let code = splice_cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut stderr);
    ExitCode::from(code as u8)
}
