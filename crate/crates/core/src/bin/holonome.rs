fn main() {
    std::process::exit(holonome::cli::main_with(std::env::args_os()));
}
