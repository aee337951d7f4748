fn main() {
    std::process::exit(conecert::cli::run());
}
