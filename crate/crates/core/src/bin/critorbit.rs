fn main() {
    std::process::exit(critorbit::cli::run(std::env::args_os()));
}
