fn main() {
    std::process::exit(frobtrace::cli::dispatch(std::env::args_os()));
}
