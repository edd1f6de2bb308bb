//! One-shot filters that strip the oscillatory part of a final solution.
//!
//! Both filters act on the flat sequence of samples, which is valid because
//! every grid here has uniform sub-spacing.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Scalar};

pub const DEFAULT_CUTOFF: f64 = 0.5;
pub const DEFAULT_KERNEL_ORDER: usize = 4;
pub const DEFAULT_KERNEL_SUPPORT: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterSpec {
    /// Drop every Fourier mode with `|ω| > cutoff · M/2`.
    SpectralCutoff { cutoff: f64 },
    /// Symmetric B-spline-sum kernel of the given accuracy order and total taps.
    LocalKernel { order: usize, support: usize },
}

impl FilterSpec {
    pub fn spectral() -> Self {
        FilterSpec::SpectralCutoff {
            cutoff: DEFAULT_CUTOFF,
        }
    }

    pub fn local() -> Self {
        FilterSpec::LocalKernel {
            order: DEFAULT_KERNEL_ORDER,
            support: DEFAULT_KERNEL_SUPPORT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FilterSpec::SpectralCutoff { cutoff } => {
                if !(cutoff > 0.0 && cutoff <= 1.0) {
                    return Err(Error::FilterConfig(format!(
                        "cutoff fraction must lie in (0, 1], got {cutoff}"
                    )));
                }
                Ok(())
            }
            FilterSpec::LocalKernel { .. } => local_kernel(self).map(|_| ()),
        }
    }

    pub fn apply<T: Scalar>(&self, v: &GridFunction<T>) -> Result<GridFunction<T>> {
        match self {
            FilterSpec::SpectralCutoff { .. } => spectral_filter(v, self),
            FilterSpec::LocalKernel { .. } => local_kernel_filter(v, self),
        }
    }

    /// Short label used in file names: `spectral` or `local`.
    pub fn label(&self) -> &'static str {
        match self {
            FilterSpec::SpectralCutoff { .. } => "spectral",
            FilterSpec::LocalKernel { .. } => "local",
        }
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterSpec::SpectralCutoff { cutoff } => write!(f, "spectral:{cutoff}"),
            FilterSpec::LocalKernel { order, support } => write!(f, "local:{order},{support}"),
        }
    }
}

/// Parses `none`, `spectral[:cutoff]` or `local[:order[,support]]`.
pub fn parse_filter(s: &str) -> Result<Option<FilterSpec>> {
    let bad = || Error::Unknown {
        kind: "filter",
        name: s.to_string(),
    };
    let (kind, args) = match s.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (s, None),
    };
    let spec = match kind {
        "none" if args.is_none() => return Ok(None),
        "spectral" => {
            let cutoff = match args {
                Some(a) => a.trim().parse().map_err(|_| bad())?,
                None => DEFAULT_CUTOFF,
            };
            FilterSpec::SpectralCutoff { cutoff }
        }
        "local" => {
            let mut order = DEFAULT_KERNEL_ORDER;
            let mut support = None;
            if let Some(a) = args {
                let mut parts = a.split([',', ':']).map(str::trim);
                order = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if let Some(p) = parts.next() {
                    support = Some(p.parse().map_err(|_| bad())?);
                }
                if parts.next().is_some() {
                    return Err(bad());
                }
            }
            let support = support.unwrap_or_else(|| default_support(order));
            FilterSpec::LocalKernel { order, support }
        }
        _ => return Err(bad()),
    };
    spec.validate()?;
    Ok(Some(spec))
}

impl FromStr for FilterSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_filter(s)?.ok_or_else(|| Error::FilterConfig("'none' is not a filter".into()))
    }
}

/// Zeroes every mode above `cutoff · M/2` and transforms back.
pub fn spectral_filter<T: Scalar>(v: &GridFunction<T>, spec: &FilterSpec) -> Result<GridFunction<T>> {
    let FilterSpec::SpectralCutoff { cutoff } = *spec else {
        return Err(Error::FilterConfig(format!("{spec} is not a spectral filter")));
    };
    spec.validate()?;
    let m = v.values().len();
    let mut buf: Vec<Complex64> = v.values().iter().map(|x| x.to_complex()).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let limit = cutoff * m as f64 / 2.0;
    for (k, z) in buf.iter_mut().enumerate() {
        let omega = if 2 * k <= m { k } else { m - k };
        if omega as f64 > limit {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let inv = 1.0 / m as f64;
    let values = buf.into_iter().map(|z| T::from_complex(z * inv)).collect();
    GridFunction::new(*v.grid(), values)
}

/// Kernel taps centred at offset 0, so tap `k` multiplies `v[i + k - support/2]`.
///
/// The kernel is `Σ_γ w_γ B(· - γ)` for `γ = -r..=r`, where `B` is the centred
/// binomial kernel of degree `support - 2r - 1` and `r = ⌈(order - 2)/2⌉`.
/// The weights make the discrete moments `Σ K_k k^p` equal `δ_{p0}` for
/// `p ≤ 2r`, so polynomials of degree `2r + 1` pass through unchanged.
pub fn local_kernel(spec: &FilterSpec) -> Result<Vec<f64>> {
    let FilterSpec::LocalKernel { order, support } = *spec else {
        return Err(Error::FilterConfig(format!("{spec} is not a local kernel")));
    };
    if order < 2 {
        return Err(Error::FilterConfig(format!("kernel order must be at least 2, got {order}")));
    }
    let r = (order - 1) / 2;
    let shifts = 2 * r + 1;
    if support < shifts + 2 || (support - shifts) % 2 != 0 {
        return Err(Error::FilterConfig(format!(
            "order {order} needs an odd support of at least {}, got {support}",
            shifts + 2
        )));
    }
    let degree = support - shifts;
    let binom = binomial_kernel(degree);
    let half = (degree / 2) as i64;

    let n = shifts;
    let r = r as i64;
    let mut a = DMatrix::<f64>::zeros(n, n);
    for p in 0..n {
        for (col, g) in (-r..=r).enumerate() {
            a[(p, col)] = binom
                .iter()
                .enumerate()
                .map(|(j, b)| b * ((j as i64 - half + g) as f64).powi(p as i32))
                .sum();
        }
    }
    let mut rhs = DVector::<f64>::zeros(n);
    rhs[0] = 1.0;
    let w = a.lu().solve(&rhs).ok_or_else(|| {
        Error::FilterConfig(format!("moment system singular for order {order}, support {support}"))
    })?;
    if !w.iter().all(|x| x.is_finite()) {
        return Err(Error::FilterConfig("moment system produced non-finite weights".into()));
    }

    let mut taps = vec![0.0; support];
    for (col, g) in (-r..=r).enumerate() {
        for (j, b) in binom.iter().enumerate() {
            taps[(j as i64 + g + r) as usize] += w[col] * b;
        }
    }
    Ok(taps)
}

fn default_support(order: usize) -> usize {
    let r = order.saturating_sub(1) / 2;
    2 * r + 1 + DEFAULT_KERNEL_SUPPORT - 3
}

/// `C(d, j) / 2^d`, `j = 0..=d`.
fn binomial_kernel(d: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for _ in 0..d {
        let mut next = vec![0.0; row.len() + 1];
        for (j, v) in row.iter().enumerate() {
            next[j] += 0.5 * v;
            next[j + 1] += 0.5 * v;
        }
        row = next;
    }
    row
}

/// Periodic convolution with [`local_kernel`].
pub fn local_kernel_filter<T: Scalar>(v: &GridFunction<T>, spec: &FilterSpec) -> Result<GridFunction<T>> {
    let taps = local_kernel(spec)?;
    let vals = v.values();
    let m = vals.len();
    if taps.len() > m {
        return Err(Error::FilterConfig(format!(
            "kernel support {} exceeds grid size {m}",
            taps.len()
        )));
    }
    let half = taps.len() / 2;
    let out = (0..m)
        .map(|i| {
            let mut acc = T::default();
            for (k, w) in taps.iter().enumerate() {
                acc += vals[(i + m + k - half) % m] * *w;
            }
            acc
        })
        .collect();
    GridFunction::new(*v.grid(), out)
}
