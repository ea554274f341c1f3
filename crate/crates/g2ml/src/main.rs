fn main() {
    let code = g2ml::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
