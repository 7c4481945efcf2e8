fn main() {
    std::process::exit(cohiggs::cli::main_with_args(std::env::args_os()));
}
