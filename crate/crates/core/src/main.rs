fn main() {
    std::process::exit(rimix::cli::main_with(std::env::args_os()));
}
