fn main() {
    std::process::exit(econ_feedback::cli::main());
}
