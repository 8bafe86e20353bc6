fn main() {
    std::process::exit(groupvalue_cli::run(std::env::args_os()));
}
