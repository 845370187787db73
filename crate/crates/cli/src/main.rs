use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = spexlab_cli::run(std::env::args_os(), &mut std::io::stdin());
    match &outcome.written_to {
        Some(path) => eprintln!("wrote {}", path.display()),
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.document.as_bytes());
            let _ = out.flush();
        }
    }
    ExitCode::from(outcome.code as u8)
}
