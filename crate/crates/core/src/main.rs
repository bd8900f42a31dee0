fn main() {
    std::process::exit(paaug::cli::run(std::env::args_os()));
}
