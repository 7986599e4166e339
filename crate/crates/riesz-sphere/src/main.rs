use clap::Parser;

fn main() {
    let cli = riesz_sphere::cli::Cli::parse();
    std::process::exit(riesz_sphere::cli::run(cli));
}
