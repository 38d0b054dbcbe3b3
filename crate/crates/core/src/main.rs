fn main() {
    std::process::exit(positroid_kp::cli::main_with_args(std::env::args_os()));
}
