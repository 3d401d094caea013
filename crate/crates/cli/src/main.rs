fn main() {
    std::process::exit(loewner_cli::run(std::env::args_os()));
}
