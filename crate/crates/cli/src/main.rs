use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_seed = std::env::var("GYROKIT_SEED").ok();
    let outcome = match gyrokit_cli::run(std::env::args_os(), env_seed.as_deref()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("gyrokit: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &outcome.path {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("gyrokit: {msg}");
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.exit_code as u8)
}
