fn main() {
    std::process::exit(choquard_lab::cli::run_from(std::env::args_os()));
}
