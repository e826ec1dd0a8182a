use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    afmlab::verify::init_worker_pool();
    let code = afmlab::cli::main_with_args(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
