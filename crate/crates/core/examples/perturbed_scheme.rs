//! The scalar scheme with an O(1) alternating perturbation still converges at
//! second order, because the error it forces lives in the Nyquist mode and
//! stays of size `(2/N)² c`.

use blockfd::analysis::perturbed_error_mode_check;
use blockfd::experiments::{reproduce_figure, FigureId, FigureOptions};
use blockfd::BlockGrid;

fn main() -> blockfd::Result<()> {
    for r in reproduce_figure(FigureId::Fig1a, &FigureOptions::default())? {
        println!("c = {:>3}: order {:.3}", r.c, r.fitted_order());
    }
    for n in [32, 64, 128] {
        let r = perturbed_error_mode_check(1.0, BlockGrid::new(n, 1)?, 1.0)?;
        println!(
            "N = {n:>3}: Nyquist amplitude {:.4e}, bound (2/N)² c = {:.4e}, within: {}",
            r.amplitude, r.bound, r.within_bound
        );
    }
    Ok(())
}
