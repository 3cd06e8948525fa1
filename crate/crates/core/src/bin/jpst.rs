use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = johnson_pst::cli::run_from(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    // clap help/version text and JSON both go to stdout; errors also carry
    // a nonzero code.
    let _ = stdout.write_all(out.text.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(out.exit_code as u8)
}
