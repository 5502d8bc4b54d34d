fn main() {
    std::process::exit(gemm_dse::cli::main());
}
