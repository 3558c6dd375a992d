fn main() {
    std::process::exit(ngp::cli::run(std::env::args_os()));
}
