fn main() -> std::process::ExitCode {
    omega_core::cli::main()
}
