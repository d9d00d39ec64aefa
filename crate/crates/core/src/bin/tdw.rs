fn main() {
    std::process::exit(tdw_core::cli::main_with_args(std::env::args_os()));
}
