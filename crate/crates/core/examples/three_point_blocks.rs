//! Both three-point block schemes across their parameter values.
//!
//! For the lower-order scheme the run also includes `c = -1.34`, where the
//! smooth eigenvalue's `h²` term vanishes for the stencil as written.

use blockfd::experiments::{reproduce_figure, run_convergence, ConvergenceSpec, FigureId, FigureOptions};
use blockfd::{Method, Problem, SchemeId};

fn main() -> blockfd::Result<()> {
    let opts = FigureOptions::default();
    for id in [FigureId::Fig2a, FigureId::Fig2b] {
        for r in reproduce_figure(id, &opts)? {
            println!("{:<12} c = {:>7}: order {:.3}", r.scheme.name(), r.c, r.fitted_order());
        }
    }
    let spec = ConvergenceSpec::new(SchemeId::Block3Low, -1.34, Problem::ExpCos, Method::Rk4, 1.0);
    let r = run_convergence(&spec)?;
    println!("{:<12} c = {:>7}: order {:.3}", r.scheme.name(), r.c, r.fitted_order());
    Ok(())
}
