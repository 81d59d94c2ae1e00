fn main() {
    std::process::exit(srkit::cli::main_with_args(std::env::args_os()));
}
