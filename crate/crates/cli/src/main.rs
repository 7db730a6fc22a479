use clap::Parser;

fn main() {
    let cli = hypergame_cli::Cli::parse();
    std::process::exit(hypergame_cli::run(cli));
}
