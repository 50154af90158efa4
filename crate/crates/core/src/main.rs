fn main() {
    std::process::exit(tempgibbs::cli::main_with(std::env::args_os()));
}
