fn main() {
    std::process::exit(sspe::cli::main());
}
