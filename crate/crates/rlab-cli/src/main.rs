use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rlab_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.opts.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("could not size the worker pool: {e}");
        }
    }
    let outcome = run(&cli);
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = stdout.write_all(outcome.output.as_bytes());
    ExitCode::from(outcome.code as u8)
}
