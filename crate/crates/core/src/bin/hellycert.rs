fn main() {
    std::process::exit(hellycert::cli::run(std::env::args()));
}
