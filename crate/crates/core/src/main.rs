fn main() {
    std::process::exit(stein_pearson::cli::run(std::env::args_os()));
}
