fn main() -> std::process::ExitCode {
    logpair::cli::main_exit()
}
