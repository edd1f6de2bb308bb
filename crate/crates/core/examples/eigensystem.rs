//! Closed-form eigenvalues and eigenvectors of the two-point block symbol,
//! checked against the numeric decomposition, and the small-`h` behaviour of
//! the smooth eigenvalue.

use blockfd::analysis::{
    closed_form_block2_eigs, compare_with_numeric, fitted_h2_coefficient, predicted_h2_coefficient,
};
use blockfd::BlockGrid;

fn main() -> blockfd::Result<()> {
    let g = BlockGrid::new(32, 2)?;
    let e = closed_form_block2_eigs(-0.25, 3, g)?;
    println!("c = -1/4, ω = 3, N = 32");
    println!("  Q1 = {:.12}  (−ω² = −9)", e.q1);
    println!("  Q2 = {:.6}", e.q2);
    println!("  smooth vector (α, β) = ({:.6}, {:.3e})", e.alpha1, e.beta1);

    for c in [0.3, -0.3, 1.0 / 6.0, -1.0 / 6.0, -0.25, 0.0] {
        for n in [16, 32, 64] {
            let r = compare_with_numeric(c, n)?;
            println!(
                "c = {c:>7.4}, N = {n:>2}: eigenvalue rel diff {:.2e}, vector diff {:.2e}, max Re {:.2e}",
                r.max_eigenvalue_rel, r.max_vector_diff, r.max_real
            );
        }
    }

    let ladder = [64, 128, 256, 512];
    for c in [0.0, 1.0 / 6.0, -1.0 / 6.0, -0.25] {
        for omega in 1..=3 {
            println!(
                "c = {c:>7.4}, ω = {omega}: (h/2)² coefficient fitted {:>10.6}, predicted {:>10.6}",
                fitted_h2_coefficient(c, omega, &ladder)?,
                predicted_h2_coefficient(c, omega)
            );
        }
    }
    Ok(())
}
