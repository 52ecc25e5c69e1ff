fn main() {
    std::process::exit(ris_ssk::cli::main());
}
