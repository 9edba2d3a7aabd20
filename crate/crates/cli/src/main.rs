fn main() {
    std::process::exit(orlicz_gauge_cli::run(std::env::args_os()));
}
