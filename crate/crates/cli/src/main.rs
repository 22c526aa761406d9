fn main() {
    std::process::exit(sl2_cli::main_stdio());
}
