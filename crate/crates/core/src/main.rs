fn main() {
    std::process::exit(jprocess::cli::run());
}
