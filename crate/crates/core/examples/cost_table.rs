//! Points outside the block and operations per point for each scheme.

fn main() {
    print!("{}", blockfd::cli::cost_table());
}
