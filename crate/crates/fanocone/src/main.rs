use std::process::ExitCode;

fn main() -> ExitCode {
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let code = fanocone::dispatch(std::env::args_os(), &mut stdin.lock(), &mut stdout.lock());
    ExitCode::from(code as u8)
}
