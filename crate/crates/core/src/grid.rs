//! Periodic block grids on `[0, 2π)`, samples on them, and the discrete L2 norm.
//!
//! A grid is made of `n_blocks` blocks of `block_size` sub-nodes each. Nodes are
//! stored block-major: `x_0, x_{1/m}, …, x_{(m-1)/m}, x_1, …`, so flat index
//! `i = j·m + k` sits at `x = j·h + k·h/m`.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DOMAIN_LENGTH: f64 = 2.0 * PI;

/// Scalars a grid function can hold: `f64` or `Complex64`.
pub trait Scalar:
    Copy
    + Default
    + Send
    + Sync
    + std::fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + AddAssign
{
    fn from_real(x: f64) -> Self;
    fn norm_sqr(self) -> f64;
    fn is_finite(self) -> bool;
    fn to_complex(self) -> Complex64;
    /// Real types keep the real part.
    fn from_complex(z: Complex64) -> Self;
}

impl Scalar for f64 {
    fn from_real(x: f64) -> Self {
        x
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn from_complex(z: Complex64) -> Self {
        z.re
    }
}

impl Scalar for Complex64 {
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn from_complex(z: Complex64) -> Self {
        z
    }
}

/// Periodic grid of `n_blocks` blocks with `block_size` uniformly spaced sub-nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockGrid {
    n_res: usize,
    n_blocks: usize,
    block_size: usize,
    h: f64,
}

impl BlockGrid {
    /// Builds the grid for resolution parameter `n_res`.
    ///
    /// Block schemes (`block_size` 2 or 3) use `n_res + 1` blocks; the scalar
    /// family (`block_size` 1) uses `n_res` points. `n_res` must be even and
    /// at least 4.
    pub fn new(n_res: usize, block_size: usize) -> Result<Self> {
        if !(1..=3).contains(&block_size) {
            return Err(Error::InvalidGrid(format!(
                "block size must be 1, 2 or 3, got {block_size}"
            )));
        }
        if n_res < 4 || !n_res.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "N must be even and at least 4, got {n_res}"
            )));
        }
        let n_blocks = if block_size == 1 { n_res } else { n_res + 1 };
        Ok(Self {
            n_res,
            n_blocks,
            block_size,
            h: DOMAIN_LENGTH / n_blocks as f64,
        })
    }

    pub fn n_res(&self) -> usize {
        self.n_res
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    /// Block spacing.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Distance between consecutive nodes, `h / m`.
    pub fn sub_spacing(&self) -> f64 {
        self.h / self.block_size as f64
    }

    /// Total number of nodes `M`.
    pub fn len(&self) -> usize {
        self.n_blocks * self.block_size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of flat node `i`.
    pub fn x(&self, i: usize) -> f64 {
        let j = i / self.block_size;
        let k = i % self.block_size;
        j as f64 * self.h + k as f64 * self.sub_spacing()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    /// Block index and position within the block of flat node `i`.
    pub fn split_index(&self, i: usize) -> (usize, usize) {
        (i / self.block_size, i % self.block_size)
    }
}

/// Samples of a scalar field on a [`BlockGrid`], in block-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T = f64> {
    grid: BlockGrid,
    values: Vec<T>,
}

impl<T: Scalar> GridFunction<T> {
    pub fn new(grid: BlockGrid, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: BlockGrid) -> Self {
        Self {
            grid,
            values: vec![T::default(); grid.len()],
        }
    }

    /// Evaluates `f` at every node.
    pub fn sample(grid: BlockGrid, f: impl Fn(f64) -> T) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.x(i))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &BlockGrid {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Grid-weighted discrete L2 norm `sqrt((2π/M) Σ |v_i|²)`.
    pub fn l2_norm(&self) -> f64 {
        l2_norm(&self.values)
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.norm_sqr().sqrt())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| v * a).collect(),
        }
    }

    /// `self - other`, checking both live on grids with the same node count.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    pub fn to_complex(&self) -> GridFunction<Complex64> {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v.to_complex()).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.values.len() != other.values.len() {
            return Err(Error::GridMismatch {
                expected: self.values.len(),
                found: other.values.len(),
            });
        }
        Ok(())
    }
}

impl GridFunction<Complex64> {
    pub fn re(&self) -> GridFunction<f64> {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v.re).collect(),
        }
    }
}

/// Grid-weighted discrete L2 norm of a flat sample vector on `[0, 2π)`.
pub fn l2_norm<T: Scalar>(values: &[T]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let sum: f64 = values.iter().map(|v| v.norm_sqr()).sum();
    (DOMAIN_LENGTH / values.len() as f64 * sum).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn two_point_block_grid() {
        let g = BlockGrid::new(32, 2).unwrap();
        assert_eq!(g.len(), 66);
        assert_eq!(g.n_blocks(), 33);
        assert_abs_diff_eq!(g.h(), 2.0 * PI / 33.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.sub_spacing(), PI / 33.0, epsilon = 1e-15);
    }

    #[test]
    fn three_point_block_grid() {
        let g = BlockGrid::new(32, 3).unwrap();
        assert_eq!(g.len(), 99);
        assert_abs_diff_eq!(g.sub_spacing(), 2.0 * PI / 99.0, epsilon = 1e-15);
    }

    #[test]
    fn scalar_grid_nodes() {
        let g = BlockGrid::new(4, 1).unwrap();
        let x = g.coordinates();
        let want = [0.0, PI / 2.0, PI, 1.5 * PI];
        for (a, b) in x.iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(BlockGrid::new(33, 2).is_err());
        assert!(BlockGrid::new(2, 2).is_err());
        assert!(BlockGrid::new(32, 4).is_err());
        assert!(BlockGrid::new(32, 0).is_err());
    }

    #[test]
    fn coordinates_increase_and_wrap_by_sub_spacing() {
        for m in 1..=3 {
            let g = BlockGrid::new(16, m).unwrap();
            let x = g.coordinates();
            let s = g.sub_spacing();
            for w in x.windows(2) {
                assert_abs_diff_eq!(w[1] - w[0], s, epsilon = 1e-13);
            }
            assert_abs_diff_eq!(DOMAIN_LENGTH - x[x.len() - 1], s, epsilon = 1e-13);
        }
    }

    #[test]
    fn sampling() {
        let g = BlockGrid::new(4, 1).unwrap();
        let ones = GridFunction::sample(g, |_| 1.0);
        assert!(ones.values().iter().all(|&v| v == 1.0));
        let c = GridFunction::sample(g, f64::cos);
        for (a, b) in c.values().iter().zip([1.0, 0.0, -1.0, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        let g = BlockGrid::new(32, 2).unwrap();
        let f = GridFunction::sample(g, |x| x.cos().exp());
        for i in 0..g.len() {
            let x = i as f64 * PI / 33.0;
            assert_abs_diff_eq!(f.values()[i], x.cos().exp(), epsilon = 1e-14);
        }
    }

    #[test]
    fn norms() {
        let g = BlockGrid::new(10, 2).unwrap();
        let ones = GridFunction::sample(g, |_| 1.0);
        assert_abs_diff_eq!(ones.l2_norm(), (2.0 * PI).sqrt(), epsilon = 1e-14);
        assert_eq!(GridFunction::<f64>::zeros(g).l2_norm(), 0.0);
        for n in [64, 256] {
            let g = BlockGrid::new(n, 1).unwrap();
            let c = GridFunction::sample(g, f64::cos);
            assert_abs_diff_eq!(c.l2_norm(), PI.sqrt(), epsilon = 1e-12);
        }
        // a non-trigonometric-polynomial integrand still converges to the continuous norm
        let exact = {
            // ∫ e^{2cos x} dx over [0,2π] = 2π I0(2)
            let i0_2 = 2.279_585_302_336_067;
            (2.0 * PI * i0_2).sqrt()
        };
        let coarse = GridFunction::sample(BlockGrid::new(4, 1).unwrap(), |x: f64| x.cos().exp());
        let fine = GridFunction::sample(BlockGrid::new(32, 1).unwrap(), |x: f64| x.cos().exp());
        assert!((fine.l2_norm() - exact).abs() < (coarse.l2_norm() - exact).abs());
        assert_abs_diff_eq!(fine.l2_norm(), exact, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn norm_is_homogeneous_and_subadditive(
            a in prop::collection::vec(-10.0f64..10.0, 12),
            b in prop::collection::vec(-10.0f64..10.0, 12),
            alpha in -5.0f64..5.0,
        ) {
            let scaled: Vec<f64> = a.iter().map(|v| v * alpha).collect();
            prop_assert!((l2_norm(&scaled) - alpha.abs() * l2_norm(&a)).abs() <= 1e-12 * (1.0 + l2_norm(&scaled)));
            let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            prop_assert!(l2_norm(&sum) <= l2_norm(&a) + l2_norm(&b) + 1e-12);
        }
    }
}
