fn main() {
    std::process::exit(wallx::cli::run());
}
