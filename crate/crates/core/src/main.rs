fn main() {
    std::process::exit(monadkit::cli::run(std::env::args_os()));
}
