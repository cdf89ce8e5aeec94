//! `ghzsim`: generate, image and test five-party hybrid GHZ states from the
//! command line. Curves and grids go out as CSV, scalar results as JSON, and
//! every run writes one JSON manifest.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use output::Run;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let common = cli.command.common().clone();
    if let Some(n) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size thread pool: {e}");
        }
    }
    let result = Run::start(&common).and_then(|mut run| {
        match &cli.command {
            Command::Generate(a) => commands::generate(&mut run, a),
            Command::Wigner(a) => commands::wigner(&mut run, a),
            Command::Bell(a) => commands::bell(&mut run, a),
            Command::Visibility(a) => commands::visibility(&mut run, a),
            Command::Optimize(a) => commands::optimize(&mut run, a),
        }?;
        run.finish(&common)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
