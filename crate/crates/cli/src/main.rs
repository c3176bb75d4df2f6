use clap::Parser;

fn main() {
    let cli = epictrl_cli::Cli::parse();
    if let Err(err) = epictrl_cli::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(epictrl_cli::exit_code(&err));
    }
}
