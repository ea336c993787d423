fn main() {
    std::process::exit(bfree::cli::main());
}
