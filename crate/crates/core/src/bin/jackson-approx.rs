use clap::Parser;
use jackson_approx::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
