pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod table;

use std::io::Write;

use config::{Cli, Command, Settings};
pub use error::{CliError, Result};

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let settings = Settings::resolve(cli)?;
    match settings.command {
        Command::Solve => commands::solve(&settings, out)?,
        Command::Sweep => commands::sweep(&settings, out)?,
        Command::Verify => commands::verify(&settings, out)?,
        Command::Table => table::table(&settings, out)?,
    };
    Ok(())
}
