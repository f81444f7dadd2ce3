use clap::Parser;

fn main() {
    let args = hodge_lattice::Args::parse();
    std::process::exit(hodge_lattice::run(&args));
}
