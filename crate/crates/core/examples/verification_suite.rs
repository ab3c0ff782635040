//! Runs the full verification battery and prints the pass/fail table.

fn main() {
    let quick = std::env::args().any(|a| a == "--quick");
    print!("{}", mutower::suite::run_suite(quick).table());
}
