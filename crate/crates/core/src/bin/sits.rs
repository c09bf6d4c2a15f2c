fn main() {
    std::process::exit(sits_sax::cli::run(std::env::args_os()));
}
