//! Truncation error `T_e = w_xx - Q w` of an operator on a smooth periodic `w`.

use crate::analysis::order::{fit_order, OrderFit};
use crate::error::{Error, Result};
use crate::grid::{l2_norm, GridFunction};
use crate::operators::{SchemeId, StencilOperator};

/// Measured truncation order over a resolution ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderEstimate {
    pub observed_order: f64,
    /// Resolution parameters `N`, strictly increasing.
    pub resolutions: Vec<usize>,
    pub residual_norms: Vec<f64>,
    pub fit: OrderFit,
}

/// `w(x) = exp(cos x)`.
pub fn default_w(x: f64) -> f64 {
    x.cos().exp()
}

/// Second derivative of [`default_w`].
pub fn default_w_xx(x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    (s * s - c) * c.exp()
}

/// Pointwise truncation error of `op` on `w`.
pub fn truncation_residual(
    op: &StencilOperator,
    w: impl Fn(f64) -> f64,
    w_xx: impl Fn(f64) -> f64,
) -> GridFunction<f64> {
    let grid = *op.grid();
    let qw = op
        .apply(&GridFunction::sample(grid, w))
        .expect("sampled on the operator grid");
    let exact = GridFunction::sample(grid, w_xx);
    exact.sub(&qw).expect("same grid")
}

fn validate_ladder(ladder: &[usize]) -> Result<()> {
    if ladder.len() < 2 || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition(format!(
            "ladder must have at least two strictly increasing entries, got {ladder:?}"
        )));
    }
    Ok(())
}

/// Truncation order of `scheme` from `‖T_e‖` over `ladder`.
pub fn truncation_order(
    scheme: SchemeId,
    c: f64,
    w: impl Fn(f64) -> f64 + Copy,
    w_xx: impl Fn(f64) -> f64 + Copy,
    ladder: &[usize],
) -> Result<OrderEstimate> {
    truncation_order_rows(scheme, c, w, w_xx, ladder, None)
}

/// Like [`truncation_order`] but restricted to one position in the block.
pub fn truncation_order_rows(
    scheme: SchemeId,
    c: f64,
    w: impl Fn(f64) -> f64 + Copy,
    w_xx: impl Fn(f64) -> f64 + Copy,
    ladder: &[usize],
    row: Option<usize>,
) -> Result<OrderEstimate> {
    validate_ladder(ladder)?;
    let mut norms = Vec::with_capacity(ladder.len());
    let mut points = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let op = scheme.build_on(n, c)?;
        let te = truncation_residual(&op, w, w_xx);
        let m = op.grid().block_size();
        let vals: Vec<f64> = match row {
            Some(k) => te
                .values()
                .iter()
                .enumerate()
                .filter(|(i, _)| i % m == k)
                .map(|(_, v)| *v)
                .collect(),
            None => te.values().to_vec(),
        };
        norms.push(l2_norm(&vals));
        points.push(op.grid().len() as f64);
    }
    let fit = fit_order(&points, &norms, 0.0);
    Ok(OrderEstimate {
        observed_order: fit.order,
        resolutions: ladder.to_vec(),
        residual_norms: norms,
        fit,
    })
}
