fn main() {
    std::process::exit(glasso_knots::run_cli(std::env::args_os()));
}
