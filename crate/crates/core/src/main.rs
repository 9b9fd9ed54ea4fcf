fn main() {
    std::process::exit(qfly_pbc::cli::main_with_args(std::env::args_os()));
}
