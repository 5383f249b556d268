fn main() {
    std::process::exit(schur_privacy_cli::run(std::env::args_os()));
}
