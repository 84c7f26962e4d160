fn main() {
    std::process::exit(seglat::cli::main());
}
