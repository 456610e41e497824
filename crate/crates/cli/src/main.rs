mod cli;
mod commands;
mod config;
mod error;
mod output;
mod svg;

use clap::error::ErrorKind;
use clap::Parser;

use cli::{Cli, Command};
use config::FileConfig;
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let file = FileConfig::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Select(a) => commands::select_cmd(a, cli.seed, &file),
        Command::GenData(a) => commands::gen_data_cmd(a, cli.seed, &file),
        Command::Train(a) => commands::train_cmd(a, cli.seed, &file),
        Command::Expressibility(a) => commands::expressibility_cmd(a, cli.seed, &file),
        Command::VerifyTheory(a) => commands::verify_theory_cmd(a, cli.seed, &file),
        Command::Report(a) => commands::report_cmd(a, cli.seed.or(file.seed)),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or_default();
            let err = CliError::Usage(first.trim_start_matches("error: ").to_string());
            eprintln!("{}", err.one_line());
            std::process::exit(err.exit_code());
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("{}", err.one_line());
        std::process::exit(err.exit_code());
    }
}
