fn main() {
    std::process::exit(hyperbarrier::cli::run(std::env::args_os()));
}
