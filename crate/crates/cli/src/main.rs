fn main() {
    std::process::exit(sigforge_cli::main_exit_code());
}
