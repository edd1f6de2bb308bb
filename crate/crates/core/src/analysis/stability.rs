//! Eigenvalue scans over all grid wavenumbers.

use std::fmt::Write as _;

use crate::analysis::symbol::{scan_symbols, BlockSymbol};
use crate::operators::{SchemeId, StencilOperator};

/// Relative tolerance on positive real parts, in units of `(m/h)²`.
pub const STABILITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub scheme: SchemeId,
    pub c: f64,
    pub n_res: usize,
    pub max_real_part: f64,
    pub max_abs_imag: f64,
    /// Largest admissible real part for the verdict.
    pub threshold: f64,
    /// Smallest and largest `|cos|` of the angle between the first two eigenvectors.
    pub min_cos_angle: f64,
    pub max_cos_angle: f64,
    /// Worst eigenvector-matrix condition number over `ω`.
    pub max_condition: f64,
    pub stable: bool,
}

impl StabilityReport {
    pub fn summary(&self) -> String {
        format!(
            "scheme={} c={} N={} max_re={:.6e} max_im={:.3e} threshold={:.3e} cos_angle=[{:.4}, {:.4}] max_cond={:.4} stable={}",
            self.scheme,
            self.c,
            self.n_res,
            self.max_real_part,
            self.max_abs_imag,
            self.threshold,
            self.min_cos_angle,
            self.max_cos_angle,
            self.max_condition,
            self.stable
        )
    }
}

/// Scans the symbol of `op` over every grid wavenumber.
///
/// The verdict requires all eigenvalues to have real part at most
/// `1e-10 (m/h)²`. For the perturbed scalar scheme the bounded shift `|c|` is
/// admitted as well, since its diagonal term only moves the spectrum by `O(c)`
/// independently of `h`.
pub fn stability_scan(op: &StencilOperator) -> (StabilityReport, Vec<BlockSymbol>) {
    let symbols = scan_symbols(op);
    let grid = op.grid();
    let unit = (grid.block_size() as f64 / grid.h()).powi(2);
    let mut threshold = STABILITY_TOLERANCE * unit;
    if op.scheme() == SchemeId::Perturbed {
        threshold += op.c().abs();
    }
    let mut max_re = f64::NEG_INFINITY;
    let mut max_im: f64 = 0.0;
    let mut min_cos = f64::INFINITY;
    let mut max_cos: f64 = 0.0;
    let mut max_cond: f64 = 1.0;
    for s in &symbols {
        for l in &s.eigenvalues {
            max_re = max_re.max(l.re);
            max_im = max_im.max(l.im.abs());
        }
        if let Some(cos) = s.cos_angle() {
            min_cos = min_cos.min(cos);
            max_cos = max_cos.max(cos);
        }
        max_cond = max_cond.max(s.eigenvector_condition());
    }
    if !min_cos.is_finite() {
        min_cos = 0.0;
    }
    let report = StabilityReport {
        scheme: op.scheme(),
        c: op.c(),
        n_res: grid.n_res(),
        max_real_part: max_re,
        max_abs_imag: max_im,
        threshold,
        min_cos_angle: min_cos,
        max_cos_angle: max_cos,
        max_condition: max_cond,
        stable: max_re <= threshold,
    };
    (report, symbols)
}

/// CSV of a symbol scan: `omega, re_lambda1.., im_lambda1.., cos_angle`.
pub fn symbol_scan_csv(symbols: &[BlockSymbol]) -> String {
    let p = symbols.first().map_or(1, |s| s.eigenvalues.len());
    let mut out = String::from("omega");
    for k in 1..=p {
        write!(out, ",re_lambda{k}").unwrap();
    }
    for k in 1..=p {
        write!(out, ",im_lambda{k}").unwrap();
    }
    out.push_str(",cos_angle\n");
    for s in symbols {
        write!(out, "{}", s.omega).unwrap();
        for l in &s.eigenvalues {
            write!(out, ",{:.16e}", l.re).unwrap();
        }
        for l in &s.eigenvalues {
            write!(out, ",{:.16e}", l.im).unwrap();
        }
        writeln!(out, ",{:.16e}", s.cos_angle().unwrap_or(0.0)).unwrap();
    }
    out
}
