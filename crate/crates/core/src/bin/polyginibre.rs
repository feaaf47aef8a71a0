fn main() {
    std::process::exit(polyginibre::cli::run(std::env::args_os()));
}
