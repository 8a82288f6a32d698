fn main() {
    std::process::exit(sts_cli::run(std::env::args_os()));
}
