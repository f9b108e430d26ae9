use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    match pascal_charpoly_cli::execute(std::env::args_os()) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(pascal_charpoly_cli::EXIT_IO as u8);
            }
            ExitCode::SUCCESS
        }
        Err((code, msg)) => {
            if code == pascal_charpoly_cli::EXIT_OK {
                print!("{msg}");
            } else {
                eprint!("{msg}");
            }
            ExitCode::from(code as u8)
        }
    }
}
