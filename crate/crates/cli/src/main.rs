mod args;
mod commands;

use std::fs;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Common, OracleCommand};
use commands::{Failure, Outcome, EXIT_IO, EXIT_PROPERTY};

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Check(a) => &a.common,
        Command::Approx(a) => &a.common,
        Command::Iterate(a) => &a.common,
        Command::Represent(a) => &a.common,
        Command::Risk(a) => &a.common,
        Command::Oracle(a) => match &a.command {
            OracleCommand::Vertices { common, .. } | OracleCommand::Minimax { common, .. } => common,
        },
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Check(a) => commands::check(a),
        Command::Approx(a) => commands::approx(a),
        Command::Iterate(a) => commands::iterate(a),
        Command::Represent(a) => commands::represent(a),
        Command::Risk(a) => commands::risk(a),
        Command::Oracle(a) => commands::oracle(&a.command),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = common(&cli.command);
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let report = commands::finish(outcome.report, common);
    let mut text = serde_json::to_string_pretty(&report).expect("JSON values serialize");
    text.push('\n');
    match &common.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_IO);
            }
        }
        None => print!("{text}"),
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_PROPERTY)
    }
}
