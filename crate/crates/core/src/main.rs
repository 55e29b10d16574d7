fn main() {
    std::process::exit(flexiplex::cli::main_with_args(std::env::args_os()));
}
