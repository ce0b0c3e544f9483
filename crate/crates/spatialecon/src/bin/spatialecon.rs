use clap::Parser;
use spatialecon::cli::{init_thread_pool_from_env, run, Cli};

fn main() {
    init_thread_pool_from_env();
    let cli = Cli::parse();
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
