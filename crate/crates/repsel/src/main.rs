fn main() {
    std::process::exit(repsel::cli::run(std::env::args()));
}
