fn main() {
    std::process::exit(spectra_lab::cli::main_entry(std::env::args_os()));
}
