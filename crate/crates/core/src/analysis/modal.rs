//! Predicted evolution of single Fourier modes and of the forced Nyquist
//! error mode, plus the small-`h` expansion of the smooth eigenvalue branch.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::analysis::closed_form::closed_form_block2_eigs;
use crate::analysis::order::least_squares_slope;
use crate::analysis::symbol::alias_wavenumber;
use crate::error::{Error, Result};
use crate::grid::{BlockGrid, GridFunction};
use crate::operators::build_perturbed;
use crate::timestep::{evolve, IntegratorSpec, Method};

/// `(1 + 4c) ω⁴ / (12 - 24c)`: leading `(h/2)²` coefficient of `Q̂₁(ω) + ω²`.
pub fn predicted_h2_coefficient(c: f64, omega: i64) -> f64 {
    (1.0 + 4.0 * c) * (omega as f64).powi(4) / (12.0 - 24.0 * c)
}

/// Extrapolated `(h/2)²` coefficient of `Q̂₁(ω) + ω²` from the closed-form
/// eigenvalue on a ladder of two-point block grids.
///
/// Fits `(Q̂₁ + ω²)/(h/2)² = a + b (h/2)²` and returns `a`.
pub fn fitted_h2_coefficient(c: f64, omega: i64, ladder: &[usize]) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &n in ladder {
        let g = BlockGrid::new(n, 2)?;
        let hs2 = g.sub_spacing().powi(2);
        let e = closed_form_block2_eigs(c, omega, g)?;
        xs.push(hs2);
        ys.push((e.q1 + (omega * omega) as f64) / hs2);
    }
    let (_, intercept) = least_squares_slope(&xs, &ys);
    Ok(intercept)
}

/// Predicted two-point block solution at time `t` from `v(0) = e^{iωx}`:
///
/// ```text
/// v(t) ≈ e^{-ω²t} [ (1 + (1+4c) ω² t (ωh/2)² / (12-24c)) e^{iωx}
///                   - i c / (4-8c) (ωh/2)³ e^{iνx} ]
/// ```
///
/// The aliased term rides on the smooth eigenvector, so it decays with it.
pub fn modal_evolution_prediction(
    c: f64,
    omega: i64,
    t: f64,
    grid: BlockGrid,
) -> Result<GridFunction<Complex64>> {
    if grid.block_size() != 2 {
        return Err(Error::BlockSizeMismatch {
            scheme: "block2",
            expected: 2,
            found: grid.block_size(),
        });
    }
    let w = omega as f64;
    if w.abs().powi(3) * grid.h() > 1.0 {
        return Err(Error::Precondition(format!(
            "|ω|³h = {:.3} exceeds 1; the small-wavenumber expansion does not apply",
            w.abs().powi(3) * grid.h()
        )));
    }
    let nu = alias_wavenumber(omega, grid.n_res())? as f64;
    let x = w * grid.h() / 2.0;
    let decay = (-w * w * t).exp();
    let smooth = decay * (1.0 + (1.0 + 4.0 * c) * w * w * t / (12.0 - 24.0 * c) * x * x);
    let alias = Complex64::new(0.0, -c / (4.0 - 8.0 * c) * x.powi(3)) * decay;
    Ok(GridFunction::sample(grid, |xi| {
        Complex64::from_polar(smooth, w * xi) + alias * Complex64::from_polar(1.0, nu * xi)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NyquistModeReport {
    pub n_res: usize,
    pub c: f64,
    pub t: f64,
    /// `|Ê_c|` in the `√(2π)`-normalised Nyquist basis.
    pub amplitude: f64,
    /// `(2/N)² c`.
    pub bound: f64,
    /// Largest deviation of the error from a pure Nyquist mode.
    pub non_nyquist_residual: f64,
    pub within_bound: bool,
}

/// Slack on the `(2/N)² c` bound for the forced Nyquist error mode.
pub const NYQUIST_BOUND_SLACK: f64 = 1.01;

/// Evolves `dE/dt = D+D- E + c(-1)^j` from `E = 0` to time `t` and measures the
/// amplitude of the resulting Nyquist mode.
pub fn perturbed_error_mode_check(c: f64, grid: BlockGrid, t: f64) -> Result<NyquistModeReport> {
    if grid.block_size() != 1 {
        return Err(Error::BlockSizeMismatch {
            scheme: "perturbed",
            expected: 1,
            found: grid.block_size(),
        });
    }
    let op = build_perturbed(grid, 0.0)?;
    let forcing = move |_t: f64, out: &mut [f64]| {
        for (i, o) in out.iter_mut().enumerate() {
            *o = if i % 2 == 0 { c } else { -c };
        }
    };
    let e0 = GridFunction::<f64>::zeros(grid);
    let r = evolve(&op, &forcing, &e0, t, &IntegratorSpec::new(Method::Rk4))?;
    let e = r.final_state.values();
    let m = e.len() as f64;
    let nyq: f64 = e
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { *v } else { -*v })
        .sum::<f64>()
        / m;
    let residual = e
        .iter()
        .enumerate()
        .map(|(i, v)| (v - if i % 2 == 0 { nyq } else { -nyq }).abs())
        .fold(0.0, f64::max);
    let amplitude = nyq.abs() / (2.0 * PI).sqrt();
    let n = grid.n_res() as f64;
    let bound = (2.0 / n).powi(2) * c.abs();
    Ok(NyquistModeReport {
        n_res: grid.n_res(),
        c,
        t,
        amplitude,
        bound,
        non_nyquist_residual: residual,
        within_bound: amplitude <= bound * NYQUIST_BOUND_SLACK,
    })
}
