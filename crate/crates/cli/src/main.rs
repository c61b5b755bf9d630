fn main() {
    std::process::exit(eqlab_cli::run(std::env::args_os()));
}
