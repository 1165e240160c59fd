fn main() {
    std::process::exit(veelab::cli::main_with_args(std::env::args_os()));
}
