fn main() {
    std::process::exit(wigtomo_cli::run_cli(std::env::args()));
}
