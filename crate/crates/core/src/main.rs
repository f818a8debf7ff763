fn main() {
    std::process::exit(qpl::cli::run(std::env::args_os()));
}
