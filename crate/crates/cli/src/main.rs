use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(qlift_cli::LOG_ENV, "warn"))
        .init();
    let outcome = qlift_cli::run(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(outcome.code);
}
