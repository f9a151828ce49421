fn main() {
    std::process::exit(exprabelo::cli::dispatch(std::env::args_os()));
}
