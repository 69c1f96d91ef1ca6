fn main() {
    std::process::exit(mfdesk::cli::run());
}
