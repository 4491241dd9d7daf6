fn main() {
    std::process::exit(ramlock::cli::main_exit());
}
