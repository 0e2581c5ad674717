fn main() {
    std::process::exit(gh_nabla::cli::run(std::env::args_os()));
}
