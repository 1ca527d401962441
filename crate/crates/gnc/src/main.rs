fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let result = gnc::cli::run(&argv);
    print!("{}", result.rendered);
    std::process::exit(result.exit_code);
}
