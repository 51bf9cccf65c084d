fn main() {
    std::process::exit(p2c::cli::main_with_args(std::env::args_os()));
}
