use clap::Parser;
use wkl_cli::args::Cli;
use wkl_cli::{run, EXIT_OK, EXIT_USAGE};

fn main() {
    if let Some(n) = std::env::var("WKL_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run(&cli));
}
