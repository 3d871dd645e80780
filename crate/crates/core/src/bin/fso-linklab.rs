fn main() {
    std::process::exit(fso_linklab::cli::run(std::env::args_os()));
}
