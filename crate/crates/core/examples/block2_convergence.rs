//! Convergence of the two-point block scheme for several `c`; only `c = -1/4`
//! lifts the order to three.

use blockfd::experiments::{reproduce_figure, FigureId, FigureOptions};

fn main() -> blockfd::Result<()> {
    for r in reproduce_figure(FigureId::Fig1b, &FigureOptions::default())? {
        println!("c = {:>8.4}: order {:.3}", r.c, r.fitted_order());
        for row in &r.rows {
            println!("    N = {:>3}  M = {:>3}  error = {:.4e}", row.n_res, row.points, row.error);
        }
    }
    Ok(())
}
