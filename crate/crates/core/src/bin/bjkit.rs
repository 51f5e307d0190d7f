fn main() {
    std::process::exit(bjkit::cli::run(std::env::args_os()));
}
