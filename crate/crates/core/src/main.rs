use clap::Parser;

fn main() {
    let cli = pscaffold::cli::Cli::parse();
    std::process::exit(pscaffold::cli::run(cli));
}
