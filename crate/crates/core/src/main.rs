fn main() {
    std::process::exit(qdyn::cli::run(std::env::args_os()));
}
