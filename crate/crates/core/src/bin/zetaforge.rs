fn main() { zetaforge::cli::main() }
