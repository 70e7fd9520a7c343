fn main() {
    std::process::exit(cstar_clone::cli::run(std::env::args_os()));
}
