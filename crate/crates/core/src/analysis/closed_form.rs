//! Closed-form eigensystem of the two-point block scheme's symbol.
//!
//! With `θ = ω h/2` the eigenvalues are
//!
//! ```text
//! Q̂_{1,2} = (-4 + 2c(cos 2θ + 3) ± Δ) / (2 (h/2)²)
//! Δ       = sqrt(2c² cos 4θ + 38c² + 8(c-1)(3c-1) cos 2θ - 32c + 8)
//! ```
//!
//! and the eigenvectors are given as coefficients `(α_k, β_k)` of `e^{iωx}`
//! and the aliased `e^{iνx}`. The vector formulas divide by
//! `c (2 sin θ + sin 2θ)` and are evaluated literally only where that is
//! non-zero; elsewhere the eigenvectors come from the numeric symbol.

use num_complex::Complex64;

use crate::analysis::symbol::numeric_block_symbol;
use crate::error::{Error, Result};
use crate::grid::BlockGrid;
use crate::operators::build_block2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block2Eigensystem {
    /// Smooth branch, `≈ -ω²`.
    pub q1: f64,
    /// Stiff branch, `≈ -(4 - 8c)/(h/2)²`.
    pub q2: f64,
    pub delta: f64,
    pub alpha1: Complex64,
    pub beta1: Complex64,
    pub alpha2: Complex64,
    pub beta2: Complex64,
    /// The eigenvector formulas were singular and numeric vectors were used.
    pub fallback: bool,
}

const SINGULAR_EPS: f64 = 1e-12;

pub fn closed_form_block2_eigs(c: f64, omega: i64, grid: BlockGrid) -> Result<Block2Eigensystem> {
    if grid.block_size() != 2 {
        return Err(Error::BlockSizeMismatch {
            scheme: "block2",
            expected: 2,
            found: grid.block_size(),
        });
    }
    let half_n = (grid.n_res() / 2) as i64;
    if omega.abs() > half_n {
        return Err(Error::Precondition(format!(
            "wavenumber {omega} outside [-{half_n}, {half_n}]"
        )));
    }
    let hs = grid.sub_spacing();
    let th = hs * omega as f64;
    let (c2, cos1, cos2, cos4) = (c * c, th.cos(), (2.0 * th).cos(), (4.0 * th).cos());

    let radicand =
        2.0 * c2 * cos4 + 38.0 * c2 + 8.0 * (c - 1.0) * (3.0 * c - 1.0) * cos2 - 32.0 * c + 8.0;
    let delta = radicand.max(0.0).sqrt();
    let trace = -4.0 + 2.0 * c * (cos2 + 3.0);
    let q1 = (trace + delta) / (2.0 * hs * hs);
    let q2 = (trace - delta) / (2.0 * hs * hs);

    let sin_sum = 2.0 * th.sin() + (2.0 * th).sin();
    let i = Complex64::i();
    let common = c2 * cos4 + 4.0 * (c * (7.0 * c - 8.0) + 2.0) * cos2 + (35.0 * c - 32.0) * c + 8.0;
    let denom = 2.0 * c2 * sin_sum * sin_sum;
    let num1 = common + 4.0 * (2.0 * c - 1.0) * delta * cos1;
    let num2 = common + 4.0 * (1.0 - 2.0 * c) * delta * cos1;

    let singular = (c * sin_sum).abs() < SINGULAR_EPS || num2.abs() < SINGULAR_EPS;
    if singular {
        let sym = numeric_block_symbol(&build_block2(grid, c)?, omega);
        let (a1, b1) = sym.alias_coefficients(0).expect("two-point block");
        let (a2, b2) = sym.alias_coefficients(1).expect("two-point block");
        let (alpha1, beta1) = fix_phase(a1, b1, true);
        let (alpha2, beta2) = fix_phase(a2, b2, false);
        return Ok(Block2Eigensystem {
            q1,
            q2,
            delta,
            alpha1,
            beta1,
            alpha2,
            beta2,
            fallback: true,
        });
    }

    let alpha1 = 1.0 / (1.0 + num1 / denom).sqrt();
    let beta1 = -i * ((8.0 * c - 4.0) * cos1 + delta) / (2.0 * c * sin_sum) * alpha1;
    let beta2 = 1.0 / (1.0 + denom / num2).sqrt();
    let alpha2 = -i * (2.0 * c * sin_sum) / ((4.0 - 8.0 * c) * cos1 + delta) * beta2;
    Ok(Block2Eigensystem {
        q1,
        q2,
        delta,
        alpha1: Complex64::new(alpha1, 0.0),
        beta1,
        alpha2,
        beta2: Complex64::new(beta2, 0.0),
        fallback: false,
    })
}

/// Rotates `(α, β)` so that `α` (first branch) or `β` (second) is real and non-negative.
pub fn fix_phase(alpha: Complex64, beta: Complex64, anchor_alpha: bool) -> (Complex64, Complex64) {
    let anchor = if anchor_alpha { alpha } else { beta };
    if anchor.norm() == 0.0 {
        return (alpha, beta);
    }
    let rot = anchor.conj() / anchor.norm();
    (alpha * rot, beta * rot)
}

/// Worst disagreement between [`closed_form_block2_eigs`] and the numeric symbol over every `ω` of one grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormComparison {
    pub c: f64,
    pub n_res: usize,
    /// `max |λ_cf - λ_num| / max(|λ_cf|, |λ_num|, 1)`.
    pub max_eigenvalue_rel: f64,
    /// Largest `|α| + |β|` difference after fixing phases.
    pub max_vector_diff: f64,
    /// Largest `|Im λ|` of the numeric eigenvalues.
    pub max_imag: f64,
    /// Largest real part over both branches.
    pub max_real: f64,
}

pub fn compare_with_numeric(c: f64, n_res: usize) -> Result<ClosedFormComparison> {
    let grid = BlockGrid::new(n_res, 2)?;
    let op = build_block2(grid, c)?;
    let half = (n_res / 2) as i64;
    let mut out = ClosedFormComparison {
        c,
        n_res,
        max_eigenvalue_rel: 0.0,
        max_vector_diff: 0.0,
        max_imag: 0.0,
        max_real: f64::NEG_INFINITY,
    };
    for omega in -half..=half {
        let cf = closed_form_block2_eigs(c, omega, grid)?;
        let num = numeric_block_symbol(&op, omega);
        for (q, l) in [cf.q1, cf.q2].iter().zip(&num.eigenvalues) {
            let scale = q.abs().max(l.norm()).max(1.0);
            out.max_eigenvalue_rel = out.max_eigenvalue_rel.max((Complex64::new(*q, 0.0) - l).norm() / scale);
            out.max_imag = out.max_imag.max(l.im.abs());
            out.max_real = out.max_real.max(l.re).max(*q);
        }
        let pairs = [(cf.alpha1, cf.beta1, 0, true), (cf.alpha2, cf.beta2, 1, false)];
        for (a, b, k, anchor_alpha) in pairs {
            let (na, nb) = num.alias_coefficients(k).expect("two-point block");
            let (na, nb) = fix_phase(na, nb, anchor_alpha);
            out.max_vector_diff = out.max_vector_diff.max((a - na).norm() + (b - nb).norm());
        }
    }
    Ok(out)
}
