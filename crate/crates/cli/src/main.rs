fn main() {
    std::process::exit(exo_cli::dispatch(std::env::args_os()));
}
