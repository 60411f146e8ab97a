fn main() {
    std::process::exit(spikequant::cli::main_with(std::env::args_os()));
}
