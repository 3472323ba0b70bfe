fn main() {
    std::process::exit(ntplus::cli::run(std::env::args_os()));
}
