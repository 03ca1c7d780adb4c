fn main() {
    std::process::exit(dqpt::harness::cli::main_with_args(std::env::args_os()));
}
