use clap::Parser;

fn main() {
    let cli = inversive_cli::Cli::parse();
    match inversive_cli::run(cli) {
        Ok(outcome) => std::process::exit(outcome.exit_code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
