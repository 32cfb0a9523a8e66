fn main() {
    std::process::exit(sublorentz::cli::run(std::env::args_os()));
}
