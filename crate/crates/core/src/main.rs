fn main() {
    std::process::exit(loopwalk::cli::run(std::env::args_os()));
}
