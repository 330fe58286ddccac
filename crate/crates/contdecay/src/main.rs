//! Binary entry point; all behavior lives in [`contdecay::cli`].

fn main() {
    std::process::exit(contdecay::cli::run());
}
