fn main() {
    std::process::exit(qseries::cli::main_with_args(std::env::args_os()));
}
