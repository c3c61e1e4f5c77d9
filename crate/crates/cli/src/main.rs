fn main() {
    std::process::exit(sct_cli::main_with_args(std::env::args_os()));
}
