fn main() -> std::process::ExitCode {
    wittlab::app::main()
}
