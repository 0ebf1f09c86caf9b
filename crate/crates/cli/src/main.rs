use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = graphgroups_cli::run(std::env::args_os());
    let written = if out.code == graphgroups_cli::EXIT_OK {
        std::io::stdout().write_all(out.report.as_bytes())
    } else {
        std::io::stderr().write_all(out.report.as_bytes())
    };
    if written.is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(out.code as u8)
}
