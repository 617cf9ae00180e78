fn main() {
    std::process::exit(razorbus::cli::main_with_args(std::env::args_os()));
}
