use clap::Parser;

fn main() {
    std::process::exit(qhier::run(qhier::Cli::parse()));
}
