fn main() {
    std::process::exit(harmonic_bounds::cli::run(std::env::args_os()));
}
