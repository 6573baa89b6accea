fn main() {
    std::process::exit(levyprop::cli::run(std::env::args_os()));
}
