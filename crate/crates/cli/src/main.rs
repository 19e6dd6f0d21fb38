use clap::Parser;
use robin_eigen_cli::config::Cli;

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    if let Err(e) = robin_eigen_cli::run(&cli, &mut stdout.lock()) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
