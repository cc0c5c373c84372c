fn main() {
    std::process::exit(hallsym::cli::run(std::env::args_os()));
}
