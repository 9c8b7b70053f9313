fn main() -> std::process::ExitCode {
    h2gnn::cli::main()
}
