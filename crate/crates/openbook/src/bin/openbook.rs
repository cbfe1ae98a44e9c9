fn main() {
    std::process::exit(openbook::cli::run(std::env::args_os()));
}
