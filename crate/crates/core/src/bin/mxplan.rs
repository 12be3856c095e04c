fn main() {
    std::process::exit(mxplan::cli::run(std::env::args_os()));
}
