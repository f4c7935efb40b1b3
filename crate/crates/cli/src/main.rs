fn main() {
    std::process::exit(symflat_cli::run(std::env::args_os()));
}
