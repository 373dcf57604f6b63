fn main() {
    std::process::exit(geneig_cli::run(std::env::args_os()));
}
