fn main() {
    std::process::exit(teamdyn::cli::run(std::env::args_os()));
}
