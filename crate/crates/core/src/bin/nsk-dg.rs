fn main() {
    std::process::exit(nsk_dg::cli::main_with_args(std::env::args_os()));
}
