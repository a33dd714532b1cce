fn main() {
    std::process::exit(thickres::cli::run(std::env::args_os()));
}
