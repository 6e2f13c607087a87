fn main() {
    std::process::exit(kbracket::cli::run(std::env::args_os()));
}
