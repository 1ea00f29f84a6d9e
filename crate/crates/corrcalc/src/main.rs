use clap::Parser;

use corrcalc::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            println!("{report}");
        }
        Err(err) => {
            println!("{}", err.to_report());
            std::process::exit(err.exit_code());
        }
    }
}
