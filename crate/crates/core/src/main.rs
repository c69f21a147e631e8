fn main() {
    std::process::exit(steklov_robin::cli::run(std::env::args_os()));
}
