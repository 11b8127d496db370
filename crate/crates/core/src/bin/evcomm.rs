fn main() {
    std::process::exit(evcomm::cli::run(std::env::args_os()));
}
