fn main() {
    std::process::exit(erdos_rogers::cli::run_main(std::env::args_os()));
}
