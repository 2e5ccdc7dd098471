fn main() {
    std::process::exit(lagflow::cli::dispatch(std::env::args_os()));
}
