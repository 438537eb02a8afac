fn main() {
    std::process::exit(kclt::cli::dispatch(std::env::args_os()));
}
