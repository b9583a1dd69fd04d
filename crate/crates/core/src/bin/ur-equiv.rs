fn main() {
    std::process::exit(ur_equiv::cli::run(std::env::args_os()));
}
