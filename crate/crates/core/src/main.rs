use std::io::Write;

fn main() {
    let (stdout, stderr, code) = qcournot::cli::run(std::env::args_os());
    let mut out = std::io::stdout().lock();
    if out.write_all(&stdout).and_then(|_| out.flush()).is_err() {
        std::process::exit(qcournot::cli::EXIT_NUMERIC);
    }
    eprint!("{stderr}");
    std::process::exit(code);
}
