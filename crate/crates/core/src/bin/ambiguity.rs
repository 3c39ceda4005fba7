fn main() {
    std::process::exit(ambiguity::cli::run(std::env::args_os()));
}
