fn main() {
    std::process::exit(corrorbit::cli::run());
}
