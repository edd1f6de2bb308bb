//! Least-squares order estimation on log–log data.

/// Slope and intercept of the least-squares line through `(x, y)`.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Result of fitting `error ≈ C · resolution^{-order}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderFit {
    pub order: f64,
    /// `log10 C`.
    pub intercept: f64,
    /// Root-mean-square deviation of `log10 error` from the fitted line.
    pub residual: f64,
    /// Indices (into the input) of the points the fit used.
    pub used: Vec<usize>,
}

/// Relative deviation of the coarsest point above which it is left out of the fit.
pub const COARSE_DROP_TOLERANCE: f64 = 0.10;

/// Fits an order to `(resolution, error)` pairs.
///
/// Non-positive or non-finite errors, and errors below `floor`, are skipped.
/// With at least four usable points, the coarsest one is dropped when the fit
/// through all of them misses it by more than [`COARSE_DROP_TOLERANCE`]
/// (relative, in the error itself). Returns `NaN` order with fewer than two
/// usable points.
pub fn fit_order(resolutions: &[f64], errors: &[f64], floor: f64) -> OrderFit {
    assert_eq!(resolutions.len(), errors.len());
    let mut used: Vec<usize> = (0..errors.len())
        .filter(|&i| errors[i].is_finite() && errors[i] > floor && errors[i] > 0.0)
        .collect();
    if used.len() < 2 {
        return OrderFit {
            order: f64::NAN,
            intercept: f64::NAN,
            residual: f64::NAN,
            used,
        };
    }
    let fit = |idx: &[usize]| {
        let x: Vec<f64> = idx.iter().map(|&i| resolutions[i].log10()).collect();
        let y: Vec<f64> = idx.iter().map(|&i| errors[i].log10()).collect();
        let (slope, icpt) = least_squares_slope(&x, &y);
        let res: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b - (icpt + slope * a)).collect();
        (slope, icpt, res)
    };
    let (mut slope, mut icpt, mut res) = fit(&used);
    if used.len() >= 4 {
        let coarsest = (0..used.len())
            .min_by(|&a, &b| resolutions[used[a]].total_cmp(&resolutions[used[b]]))
            .unwrap();
        if (10f64.powf(res[coarsest]) - 1.0).abs() > COARSE_DROP_TOLERANCE {
            used.remove(coarsest);
            (slope, icpt, res) = fit(&used);
        }
    }
    let rms = (res.iter().map(|r| r * r).sum::<f64>() / res.len() as f64).sqrt();
    OrderFit {
        order: -slope,
        intercept: icpt,
        residual: rms,
        used,
    }
}
