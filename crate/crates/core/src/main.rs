use clap::Parser;

fn main() {
    let cli = fdiagram::cli::Cli::parse();
    let code = fdiagram::cli::run(
        cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
