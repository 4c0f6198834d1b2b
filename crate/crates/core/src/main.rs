fn main() {
    std::process::exit(distancing_core::cli::run(std::env::args_os()));
}
