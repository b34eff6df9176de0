fn main() {
    std::process::exit(porc_cli::run(std::env::args_os()));
}
