use clap::Parser;

fn main() {
    let cli = tma_cli::Cli::parse();
    if let Err(e) = tma_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
