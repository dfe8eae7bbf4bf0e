fn main() {
    std::process::exit(freqmom_cli::run(std::env::args_os().collect()));
}
