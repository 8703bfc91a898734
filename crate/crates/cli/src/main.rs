fn main() {
    let code = specenc_cli::run(
        std::env::args_os(),
        std::env::var(specenc_cli::THREADS_ENV).ok(),
    );
    std::process::exit(code);
}
