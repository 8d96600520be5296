use std::io::Write;

fn main() {
    let r = qwp_cli::execute(std::env::args_os(), &qwp_cli::Env::from_process());
    let mut out = std::io::stdout().lock();
    out.write_all(r.stdout.as_bytes()).expect("stdout");
    out.flush().expect("stdout");
    std::process::exit(r.code);
}
