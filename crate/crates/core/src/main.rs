fn main() {
    std::process::exit(ulrich::cli::run(std::env::args_os()));
}
