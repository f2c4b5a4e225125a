fn main() {
    std::process::exit(rooftop_cli::run());
}
