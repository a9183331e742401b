fn main() {
    std::process::exit(womkit::cli::main());
}
