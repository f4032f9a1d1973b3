use std::io::{self, BufWriter, Write};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut input = stdin.lock();
    let mut out = BufWriter::new(stdout.lock());
    let mut err = stderr.lock();
    let code = delzant::cli::run(&args, &mut input, &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
