//! Command-line front end: transforms, spectrogram export, the inequality
//! verification suite, the worked example and the recovery experiment.
//!
//! Exit status: 0 when everything asserted passed, 1 when an asserted check
//! failed, 2 on configuration or IO errors.

mod commands;
mod opts;

use clap::Parser;
use opts::Cli;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();

    #[cfg(feature = "parallel")]
    if let Some(threads) = cli.threads {
        // worker count never changes results, only wall time
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    if cli.threads.is_some() {
        eprintln!("note: built without the parallel feature; --threads ignored");
    }

    match commands::run(&cli) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
