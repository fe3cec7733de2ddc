fn main() {
    std::process::exit(qds::cli::run(std::env::args_os()));
}
