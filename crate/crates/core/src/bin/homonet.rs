fn main() {
    std::process::exit(homonet::cli::main_with_args(std::env::args_os()));
}
