fn main() {
    std::process::exit(hodgekit::cli::run());
}
