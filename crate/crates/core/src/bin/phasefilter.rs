fn main() {
    std::process::exit(phasefilter::cli::run(std::env::args_os()));
}
