use std::io::Write;

fn main() {
    let out = sk3_cli::run(std::env::args());
    print!("{}", out.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
