fn main() {
    std::process::exit(fanmori::cli::run(std::env::args_os()));
}
