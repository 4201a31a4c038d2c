fn main() {
    std::process::exit(unclab::cli::run(std::env::args_os()));
}
