fn main() {
    let code = gitstab::cli::main_from_args(std::env::args());
    std::process::exit(code);
}
