fn main() {
    std::process::exit(deltashell::cli::main_with_args(std::env::args_os()));
}
