fn main() {
    std::process::exit(subset_sums::cli::run(std::env::args_os()));
}
