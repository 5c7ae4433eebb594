fn main() {
    std::process::exit(glassfd::cli::main());
}
