fn main() {
    std::process::exit(blockfd::cli::main_with_args(std::env::args_os()));
}
