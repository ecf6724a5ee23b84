use clap::Parser;

fn main() {
    let cli = chart_cli::cli::Cli::parse();
    std::process::exit(chart_cli::cli::run(cli));
}
