use clap::Parser;

use qess_core::cli::{run, Args};

fn main() {
    let args = Args::parse();
    std::process::exit(run(&args));
}
