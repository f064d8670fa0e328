fn main() {
    std::process::exit(gappath::cli::main_with_args(std::env::args_os()));
}
