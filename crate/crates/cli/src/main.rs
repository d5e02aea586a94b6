use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let degree = std::env::var("STJ_MAX_DEGREE").ok();
    let code = stieltjes_cli::run(&args, degree.as_deref(), &mut io::stdin().lock(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
