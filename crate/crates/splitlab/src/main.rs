fn main() {
    std::process::exit(splitlab::cli::main_entry());
}
