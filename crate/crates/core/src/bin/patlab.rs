fn main() {
    std::process::exit(patlab::cli::run(std::env::args_os()));
}
