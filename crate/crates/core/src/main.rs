fn main() {
    std::process::exit(ldpc_cat::cli::run(std::env::args_os()));
}
