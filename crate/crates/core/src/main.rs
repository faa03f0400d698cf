fn main() {
    std::process::exit(homogeneity::cli::main());
}
