fn main() {
    std::process::exit(spinqc::cli::main_with_args(std::env::args_os()));
}
