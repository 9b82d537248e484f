use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use equifreq_cli::{run, Context};

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut err = io::stderr();
    let code = run(std::env::args_os(), Context::from_env(), &mut out, &mut err);
    if out.flush().is_err() && code == 0 {
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
