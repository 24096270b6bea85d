fn main() {
    std::process::exit(driftbench::cli::main(std::env::args_os()));
}
