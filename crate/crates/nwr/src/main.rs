fn main() {
    std::process::exit(nwr::cli::run(std::env::args_os()));
}
