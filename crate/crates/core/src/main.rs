fn main() {
    std::process::exit(wrcollapse::cli::run_from_env());
}
