fn main() {
    std::process::exit(riemann_lab::cli::run(std::env::args_os()));
}
