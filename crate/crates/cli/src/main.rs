use clap::Parser;

fn main() {
    let cli = culina_cli::cli::Cli::parse();
    if let Err(err) = culina_cli::cli::run(cli) {
        std::process::exit(culina_cli::report_error(&err));
    }
}
