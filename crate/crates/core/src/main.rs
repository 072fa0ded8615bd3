fn main() {
    std::process::exit(rarelab::cli::run(std::env::args_os()));
}
