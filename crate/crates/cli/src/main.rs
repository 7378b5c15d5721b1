//! `cc`: command-line front end for Compliance Cards.

mod args;
mod commands;
mod scaffold;

use clap::Parser;

fn main() {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_ERROR } else { commands::EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = commands::run(cli).unwrap_or_else(commands::Failure::report);
    std::process::exit(code);
}
