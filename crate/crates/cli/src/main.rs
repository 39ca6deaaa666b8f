use clap::Parser;

fn main() {
    let cli = turnpike_cli::Cli::parse();
    std::process::exit(turnpike_cli::main_with(cli));
}
