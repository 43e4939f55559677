fn main() {
    let code = bn2::cli::run(std::env::args_os());
    std::process::exit(code);
}
