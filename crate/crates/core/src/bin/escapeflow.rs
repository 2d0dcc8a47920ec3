fn main() {
    std::process::exit(escapeflow::cli::main(std::env::args_os()));
}
