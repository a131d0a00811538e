//! `fane`: build, walk, embed, eval, viz, bench and run subcommands.
//!
//! Exit codes: 0 on success, 2 on invalid input or arguments, 3 when a
//! stage fails for any other reason.

mod args;
mod commands;
mod config;
mod output;
mod ranges;

use std::fmt::Display;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use args::{Cli, Command};

pub struct Failure {
    code: u8,
    stage: &'static str,
    error: anyhow::Error,
}

impl Failure {
    pub fn input(stage: &'static str, error: anyhow::Error) -> Self {
        Self { code: 2, stage, error }
    }

    pub fn stage(stage: &'static str, error: anyhow::Error) -> Self {
        Self { code: 3, stage, error }
    }

    fn from_core(stage: &'static str, e: fane_core::Error) -> Self {
        let code = if e.is_input_error() { 2 } else { 3 };
        Self { code, stage, error: e.into() }
    }
}

pub type CmdResult<T> = Result<T, Failure>;

pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> CmdResult<T>;
    fn stage_in(self, stage: &'static str, what: impl Display) -> CmdResult<T>;
}

impl<T> StageExt<T> for fane_core::Result<T> {
    fn stage(self, stage: &'static str) -> CmdResult<T> {
        self.map_err(|e| Failure::from_core(stage, e))
    }

    fn stage_in(self, stage: &'static str, what: impl Display) -> CmdResult<T> {
        self.map_err(|e| {
            let mut f = Failure::from_core(stage, e);
            f.error = f.error.context(what.to_string());
            f
        })
    }
}

fn main() -> ExitCode {
    let subcommands: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_owned()).collect();
    let names: Vec<&str> = subcommands.iter().map(String::as_str).collect();
    let argv = match config::expand_config(std::env::args_os().collect(), &names) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    // clap exits with 2 on argument errors and 0 for --help
    let cli = Cli::parse_from(argv);
    env_logger::Builder::new()
        .parse_filters(&cli.log_level)
        .format_timestamp(None)
        .init();
    let result = match &cli.command {
        Command::Build(a) => commands::build(a),
        Command::Walk(a) => commands::walk(a),
        Command::Embed(a) => commands::embed(a),
        Command::Eval(a) => commands::eval(a),
        Command::Viz(a) => commands::viz(a),
        Command::Bench(a) => commands::bench(a),
        Command::Run(a) => commands::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error in {} stage: {:#}", f.stage, f.error);
            ExitCode::from(f.code)
        }
    }
}
