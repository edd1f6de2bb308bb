//! Evolves a single Fourier mode under the two-point block scheme and compares
//! with the predicted smooth decay plus the small aliased companion.

use blockfd::analysis::modal_evolution_prediction;
use blockfd::operators::build_block2;
use blockfd::timestep::{evolve, NoForcing};
use blockfd::{BlockGrid, GridFunction, IntegratorSpec, Method};
use num_complex::Complex64;

fn main() -> blockfd::Result<()> {
    let (c, omega, t) = (-0.25, 2i64, 0.5);
    for n in [64, 128, 256, 512] {
        let g = BlockGrid::new(n, 2)?;
        let op = build_block2(g, c)?;
        let v0 = GridFunction::sample(g, |x| Complex64::from_polar(1.0, omega as f64 * x));
        let v = evolve(&op, &NoForcing, &v0, t, &IntegratorSpec::new(Method::Rk6))?.final_state;
        let predicted = modal_evolution_prediction(c, omega, t, g)?;
        let exact = GridFunction::sample(g, |x| {
            Complex64::from_polar((-(omega * omega) as f64 * t).exp(), omega as f64 * x)
        });
        println!(
            "N = {n:>3}: ‖v − u‖ = {:.3e}, ‖v − prediction‖ = {:.3e}",
            v.sub(&exact)?.l2_norm(),
            v.sub(&predicted)?.l2_norm()
        );
    }
    Ok(())
}
