use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = cara_cli::run(std::env::args_os());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(out.stdout.as_bytes())
        .and_then(|()| stdout.flush())
        .is_err()
    {
        return ExitCode::from(74);
    }
    ExitCode::from(out.code as u8)
}
