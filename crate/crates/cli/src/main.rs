use clap::Parser;

fn main() {
    let cli = conic_forge_cli::Cli::parse();
    std::process::exit(conic_forge_cli::run(&cli));
}
