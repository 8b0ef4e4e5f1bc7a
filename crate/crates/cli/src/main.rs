fn main() {
    std::process::exit(patmark_cli::app::run_from_args());
}
