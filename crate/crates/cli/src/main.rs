//! `rpaving`: command-line front end for r-characteristic polynomials,
//! pavings, barrier bounds, identity checks and counterexample searches.

mod commands;
mod config;
mod output;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.config.validate() {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
        Ok(p) => p,
        Err(e) => return fail(&config::CliError::Input(format!("thread pool: {e}"))),
    };
    let result = pool.install(|| match &cli.command {
        Command::Detr => commands::detr(&cfg),
        Command::Chir => commands::chir(&cfg),
        Command::Pavings => commands::pavings(&cfg),
        Command::Bound => commands::bound(&cfg),
        Command::Verify => verify::run(&cfg),
        Command::Search { kind } => commands::search(&cfg, *kind),
        Command::Stability => commands::stability(&cfg),
    });
    match result {
        Ok(report) => {
            let text = match output::render(&report, cfg.output) {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            print!("{text}");
            ExitCode::from(report.exit_code())
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &config::CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code())
}
