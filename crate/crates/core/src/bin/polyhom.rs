fn main() {
    std::process::exit(polyhom::run_cli());
}
