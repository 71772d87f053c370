fn main() {
    let code = moviedesc_cli::run(std::env::args_os());
    std::process::exit(code);
}
