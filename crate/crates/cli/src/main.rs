fn main() {
    std::process::exit(cusp_cli::run(std::env::args_os()));
}
