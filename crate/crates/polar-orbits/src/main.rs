fn main() {
    // stderr stays unlocked: survey workers log to it from other threads
    let code = polar_orbits::cli::run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr());
    std::process::exit(code);
}
