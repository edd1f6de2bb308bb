//! Periodic stencil operators approximating `d²/dx²` on block grids.
//!
//! Every operator is a list of stencil rows, one per node position inside the
//! repeating period, each row a list of `(offset, coefficient)` taps in
//! sub-spacing units. The application is
//!
//! ```text
//! (Qv)_i = scale · Σ coef · v_{(i + offset) mod M} + shift[i mod period] · v_i
//! ```
//!
//! where the diagonal `shift` carries the `(-1)^j c` term of the perturbed
//! scheme and is zero otherwise. Coefficients are folded at build time
//! (`base + c · pattern`) and exact zeros are dropped, so the stored taps are
//! exactly the work done per point.
//!
//! Every row sums to zero. The centre coefficient is stored as minus the sum
//! of the others and rows are applied in difference form
//! `Σ w (v_{i+o} - v_i)`, so constants are annihilated exactly.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::{BlockGrid, GridFunction, Scalar};

/// The discretisations this crate knows how to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    /// `D+D- v_j + (-1)^j c v_j` on a scalar grid.
    Perturbed,
    /// Two-point block scheme, third order at `c = -1/4`.
    Block2,
    /// Three-point block scheme, second order for generic `c`.
    Block3Low,
    /// Three-point block scheme, fifth order at `c = -0.385`.
    Block3High,
    Std2,
    Std4,
    Std6,
}

impl SchemeId {
    pub const ALL: [SchemeId; 7] = [
        SchemeId::Perturbed,
        SchemeId::Block2,
        SchemeId::Block3Low,
        SchemeId::Block3High,
        SchemeId::Std2,
        SchemeId::Std4,
        SchemeId::Std6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Perturbed => "perturbed",
            SchemeId::Block2 => "block2",
            SchemeId::Block3Low => "block3-low",
            SchemeId::Block3High => "block3-high",
            SchemeId::Std2 => "std2",
            SchemeId::Std4 => "std4",
            SchemeId::Std6 => "std6",
        }
    }

    /// Number of sub-nodes per grid block.
    pub fn block_size(self) -> usize {
        match self {
            SchemeId::Block2 => 2,
            SchemeId::Block3Low | SchemeId::Block3High => 3,
            _ => 1,
        }
    }

    pub fn is_block(self) -> bool {
        self.block_size() > 1
    }

    /// Builds the operator for this scheme on `grid`. Standard schemes ignore `c`.
    pub fn build(self, grid: BlockGrid, c: f64) -> Result<StencilOperator> {
        match self {
            SchemeId::Perturbed => build_perturbed(grid, c),
            SchemeId::Block2 => build_block2(grid, c),
            SchemeId::Block3Low => build_block3_low(grid, c),
            SchemeId::Block3High => build_block3_high(grid, c),
            SchemeId::Std2 => build_standard(grid, 2),
            SchemeId::Std4 => build_standard(grid, 4),
            SchemeId::Std6 => build_standard(grid, 6),
        }
    }

    /// Builds the grid for resolution `n_res` and the operator on it.
    pub fn build_on(self, n_res: usize, c: f64) -> Result<StencilOperator> {
        self.build(BlockGrid::new(n_res, self.block_size())?, c)
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        let id = match key.as_str() {
            "perturbed" | "scheme-2.20" => SchemeId::Perturbed,
            "block2" => SchemeId::Block2,
            "block3-low" | "block3-3rd" => SchemeId::Block3Low,
            "block3-high" | "block3-5th" => SchemeId::Block3High,
            "std2" => SchemeId::Std2,
            "std4" => SchemeId::Std4,
            "std6" => SchemeId::Std6,
            _ => {
                return Err(Error::Unknown {
                    kind: "scheme",
                    name: s.to_string(),
                })
            }
        };
        Ok(id)
    }
}

/// One stencil tap: offset in sub-spacing units and its (unscaled) coefficient.
pub type Tap = (isize, f64);

#[derive(Debug, Clone, PartialEq)]
pub struct StencilOperator {
    grid: BlockGrid,
    scheme: SchemeId,
    c: f64,
    scale: f64,
    rows: Vec<Vec<Tap>>,
    shift: Vec<f64>,
    // off-centre taps with `scale` multiplied in, used by `apply`
    scaled: Vec<Vec<Tap>>,
}

impl StencilOperator {
    fn new(
        grid: BlockGrid,
        scheme: SchemeId,
        c: f64,
        scale: f64,
        rows: Vec<Vec<Tap>>,
        shift: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(rows.len(), shift.len());
        debug_assert_eq!(grid.len() % rows.len(), 0);
        let rows: Vec<Vec<Tap>> = rows.into_iter().map(balance).collect();
        let scaled = rows
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|(o, _)| *o != 0)
                    .map(|&(o, w)| (o, w * scale))
                    .collect()
            })
            .collect();
        Self {
            grid,
            scheme,
            c,
            scale,
            rows,
            shift,
            scaled,
        }
    }

    pub fn grid(&self) -> &BlockGrid {
        &self.grid
    }

    pub fn scheme(&self) -> SchemeId {
        self.scheme
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Unscaled stencil rows, one per position in the period.
    pub fn rows(&self) -> &[Vec<Tap>] {
        &self.rows
    }

    /// Diagonal position-dependent term per position in the period.
    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    /// Number of consecutive nodes after which the stencil pattern repeats.
    pub fn period(&self) -> usize {
        self.rows.len()
    }

    /// Coefficient of the tap at `offset` in `row`, zero if absent.
    pub fn coefficient(&self, row: usize, offset: isize) -> f64 {
        self.rows[row]
            .iter()
            .find(|(o, _)| *o == offset)
            .map_or(0.0, |&(_, w)| w)
    }

    /// Largest absolute tap offset.
    pub fn reach(&self) -> usize {
        self.rows
            .iter()
            .flatten()
            .map(|(o, _)| o.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn apply<T: Scalar>(&self, v: &GridFunction<T>) -> Result<GridFunction<T>> {
        if v.values().len() != self.grid.len() {
            return Err(Error::GridMismatch {
                expected: self.grid.len(),
                found: v.values().len(),
            });
        }
        let mut out = vec![T::default(); self.grid.len()];
        self.apply_into(v.values(), &mut out);
        GridFunction::new(self.grid, out)
    }

    /// Matrix-free application on raw slices of length `M`.
    pub fn apply_into<T: Scalar>(&self, v: &[T], out: &mut [T]) {
        let n = self.grid.len();
        assert_eq!(v.len(), n);
        assert_eq!(out.len(), n);
        let p = self.period();
        let r = self.reach();
        let has_shift = self.shift.iter().any(|&s| s != 0.0);
        for (i, o) in out.iter_mut().enumerate() {
            let k = i % p;
            let vi = v[i];
            let mut acc = T::default();
            if i >= r && i + r < n {
                for &(off, w) in &self.scaled[k] {
                    acc += (v[(i as isize + off) as usize] - vi) * w;
                }
            } else {
                for &(off, w) in &self.scaled[k] {
                    let idx = (i as isize + off).rem_euclid(n as isize) as usize;
                    acc += (v[idx] - vi) * w;
                }
            }
            if has_shift {
                acc += v[i] * self.shift[k];
            }
            *o = acc;
        }
    }

    /// Dense `M × M` matrix of the operator.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.grid.len();
        let p = self.period();
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            let k = i % p;
            for &(off, w) in &self.rows[k] {
                let col = (i as isize + off).rem_euclid(n as isize) as usize;
                a[(i, col)] += self.scale * w;
            }
            a[(i, i)] += self.shift[k];
        }
        a
    }

    /// Human-readable `offset → coefficient` table.
    pub fn stencil_table(&self) -> String {
        let mut s = format!(
            "{} (c = {}) on {} blocks x {} sub-nodes, scale = {:.6e}\n",
            self.scheme,
            self.c,
            self.grid.n_blocks(),
            self.grid.block_size(),
            self.scale
        );
        let m = self.grid.block_size();
        for (k, row) in self.rows.iter().enumerate() {
            let label = if m == 1 && self.period() == 2 {
                format!("j {}", if k == 0 { "even" } else { "odd" })
            } else if k == 0 {
                "x_j".to_string()
            } else {
                format!("x_{{j+{k}/{m}}}")
            };
            s.push_str(&format!("  row {k} ({label}):"));
            for &(off, w) in row {
                s.push_str(&format!(" [{off:+}] {w}"));
            }
            if self.shift[k] != 0.0 {
                s.push_str(&format!(" + diag {}", self.shift[k]));
            }
            s.push('\n');
        }
        s
    }

    /// Operation count and reach outside the block, averaged over rows.
    pub fn stencil_cost(&self) -> StencilCost {
        let m = self.grid.block_size() as isize;
        let p = self.period();
        let mut taps = 0;
        let (mut left, mut right) = (0usize, 0usize);
        for (k, row) in self.rows.iter().enumerate() {
            let extra = usize::from(self.shift[k] != 0.0 && !row.iter().any(|(o, _)| *o == 0));
            taps += row.len() + extra;
            let pos = (k as isize) % m;
            for &(off, _) in row {
                let at = pos + off;
                if at < 0 {
                    left = left.max((-at) as usize);
                } else if at >= m {
                    right = right.max((at - m + 1) as usize);
                }
            }
        }
        let mults = Fraction::new(taps as u64, p as u64);
        let adds = Fraction::new((taps - p) as u64, p as u64);
        StencilCost {
            adds,
            mults,
            points_left: left,
            points_right: right,
        }
    }
}

/// Non-negative rational used for per-point operation counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0);
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.num / self.den;
        let rem = self.num % self.den;
        match (whole, rem) {
            (w, 0) => write!(f, "{w}"),
            (0, r) => write!(f, "{r}/{}", self.den),
            (w, r) => write!(f, "{w} {r}/{}", self.den),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StencilCost {
    pub adds: Fraction,
    pub mults: Fraction,
    pub points_left: usize,
    pub points_right: usize,
}

impl StencilCost {
    pub fn points_per_side(&self) -> usize {
        self.points_left.max(self.points_right)
    }
}

fn require_block(scheme: SchemeId, grid: &BlockGrid) -> Result<()> {
    if grid.block_size() != scheme.block_size() {
        return Err(Error::BlockSizeMismatch {
            scheme: scheme.name(),
            expected: scheme.block_size(),
            found: grid.block_size(),
        });
    }
    Ok(())
}

/// Sets the centre tap to minus the sum of the off-centre taps.
fn balance(mut row: Vec<Tap>) -> Vec<Tap> {
    let off_sum: f64 = row.iter().filter(|(o, _)| *o != 0).map(|t| t.1).sum();
    match row.iter_mut().find(|(o, _)| *o == 0) {
        Some(centre) => centre.1 = -off_sum,
        None if off_sum != 0.0 => row.push((0, -off_sum)),
        None => {}
    }
    row.sort_by_key(|t| t.0);
    row
}

/// Folds `base + c · pattern` over aligned offsets, dropping exact zeros.
fn fold(offsets: std::ops::RangeInclusive<isize>, base: &[f64], pattern: &[f64], c: f64) -> Vec<Tap> {
    offsets
        .zip(base.iter().zip(pattern))
        .map(|(o, (&b, &p))| (o, b + c * p))
        .filter(|&(_, w)| w != 0.0)
        .collect()
}

/// `D+D- v_j + (-1)^j c v_j` on a scalar grid with even `N`.
pub fn build_perturbed(grid: BlockGrid, c: f64) -> Result<StencilOperator> {
    require_block(SchemeId::Perturbed, &grid)?;
    let row = vec![(-1, 1.0), (0, -2.0), (1, 1.0)];
    let h = grid.h();
    Ok(StencilOperator::new(
        grid,
        SchemeId::Perturbed,
        c,
        1.0 / (h * h),
        vec![row.clone(), row],
        vec![c, -c],
    ))
}

/// Two-point block scheme on `x_j`, `x_{j+1/2}`.
pub fn build_block2(grid: BlockGrid, c: f64) -> Result<StencilOperator> {
    require_block(SchemeId::Block2, &grid)?;
    let s = grid.sub_spacing();
    // x_j: (u_{j-1/2} - 2u_j + u_{j+1/2}) + c(-u_{j-1/2} + 3u_j - 3u_{j+1/2} + u_{j+1})
    let r0 = fold(-1..=2, &[1.0, -2.0, 1.0, 0.0], &[-1.0, 3.0, -3.0, 1.0], c);
    // x_{j+1/2}: (u_j - 2u_{j+1/2} + u_{j+1}) + c(u_{j-1/2} - 3u_j + 3u_{j+1/2} - u_{j+1})
    let r1 = fold(-2..=1, &[0.0, 1.0, -2.0, 1.0], &[1.0, -3.0, 3.0, -1.0], c);
    Ok(StencilOperator::new(
        grid,
        SchemeId::Block2,
        c,
        1.0 / (s * s),
        vec![r0, r1],
        vec![0.0; 2],
    ))
}

/// Three-point block scheme with `O(h)` outer rows and a plain middle row.
pub fn build_block3_low(grid: BlockGrid, c: f64) -> Result<StencilOperator> {
    require_block(SchemeId::Block3Low, &grid)?;
    let s = grid.sub_spacing();
    let r0 = fold(-1..=2, &[4.0, -8.0, 4.0, 0.0], &[-1.0, 3.0, -3.0, 1.0], c);
    let r1 = fold(-1..=1, &[4.0, -8.0, 4.0], &[0.0; 3], c);
    let r2 = fold(-2..=1, &[0.0, 4.0, -8.0, 4.0], &[1.0, -3.0, 3.0, -1.0], c);
    Ok(StencilOperator::new(
        grid,
        SchemeId::Block3Low,
        c,
        1.0 / (4.0 * s * s),
        vec![r0, r1, r2],
        vec![0.0; 3],
    ))
}

/// Three-point block scheme built on the five-point fourth-order stencil plus
/// a symmetric fifth-difference correction on the outer rows.
///
/// At `c = 1` the outermost taps (`u_{j-2/3}` on the first row and `u_{j+4/3}`
/// on the last) cancel exactly.
pub fn build_block3_high(grid: BlockGrid, c: f64) -> Result<StencilOperator> {
    require_block(SchemeId::Block3High, &grid)?;
    let s = grid.sub_spacing();
    let five = [-1.0, 16.0, -30.0, 16.0, -1.0];
    let r0 = fold(
        -2..=3,
        &[five[0], five[1], five[2], five[3], five[4], 0.0],
        &[1.0, -5.0, 10.0, -10.0, 5.0, -1.0],
        c,
    );
    let r1 = fold(-2..=2, &five, &[0.0; 5], c);
    let r2 = fold(
        -3..=2,
        &[0.0, five[0], five[1], five[2], five[3], five[4]],
        &[-1.0, 5.0, -10.0, 10.0, -5.0, 1.0],
        c,
    );
    Ok(StencilOperator::new(
        grid,
        SchemeId::Block3High,
        c,
        1.0 / (12.0 * s * s),
        vec![r0, r1, r2],
        vec![0.0; 3],
    ))
}

/// Classical central second differences of order 2, 4 or 6.
pub fn build_standard(grid: BlockGrid, order: usize) -> Result<StencilOperator> {
    let (id, coeffs, denom): (SchemeId, &[f64], f64) = match order {
        2 => (SchemeId::Std2, &[1.0, -2.0, 1.0], 1.0),
        4 => (SchemeId::Std4, &[-1.0, 16.0, -30.0, 16.0, -1.0], 12.0),
        6 => (
            SchemeId::Std6,
            &[2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0],
            180.0,
        ),
        _ => {
            return Err(Error::Precondition(format!(
                "standard stencils exist for orders 2, 4, 6; got {order}"
            )))
        }
    };
    require_block(id, &grid)?;
    let half = (coeffs.len() / 2) as isize;
    if grid.len() < coeffs.len() {
        return Err(Error::InvalidGrid(format!(
            "{} points is too few for a {}-point stencil",
            grid.len(),
            coeffs.len()
        )));
    }
    let row: Vec<Tap> = (-half..=half).zip(coeffs.iter().copied()).collect();
    let s = grid.sub_spacing();
    Ok(StencilOperator::new(
        grid,
        id,
        0.0,
        1.0 / (denom * s * s),
        vec![row],
        vec![0.0],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn grid(n: usize, m: usize) -> BlockGrid {
        BlockGrid::new(n, m).unwrap()
    }

    /// Dense matrix written directly from the scheme formulas, independent of
    /// the row tables used by `apply`.
    fn oracle_dense(scheme: SchemeId, g: BlockGrid, c: f64) -> DMatrix<f64> {
        let n = g.len();
        let mut a = DMatrix::zeros(n, n);
        let s = g.sub_spacing();
        let idx = |i: isize| i.rem_euclid(n as isize) as usize;
        for i in 0..n {
            let ii = i as isize;
            let k = i % g.block_size();
            let mut put = |off: isize, w: f64| a[(i, idx(ii + off))] += w;
            match (scheme, k) {
                (SchemeId::Block2, 0) => {
                    let q = 1.0 / (s * s);
                    put(-1, q * (1.0 - c));
                    put(0, q * (-2.0 + 3.0 * c));
                    put(1, q * (1.0 - 3.0 * c));
                    put(2, q * c);
                }
                (SchemeId::Block2, 1) => {
                    let q = 1.0 / (s * s);
                    put(-2, q * c);
                    put(-1, q * (1.0 - 3.0 * c));
                    put(0, q * (-2.0 + 3.0 * c));
                    put(1, q * (1.0 - c));
                }
                (SchemeId::Block3High, 1) => {
                    let q = 1.0 / (12.0 * s * s);
                    for (o, w) in [(-2, -1.0), (-1, 16.0), (0, -30.0), (1, 16.0), (2, -1.0)] {
                        put(o, q * w);
                    }
                }
                (SchemeId::Block3High, 0) => {
                    let q = 1.0 / (12.0 * s * s);
                    for (o, w) in [(-2, -1.0), (-1, 16.0), (0, -30.0), (1, 16.0), (2, -1.0)] {
                        put(o, q * w);
                    }
                    for (o, w) in [(-2, 1.0), (-1, -5.0), (0, 10.0), (1, -10.0), (2, 5.0), (3, -1.0)] {
                        put(o, q * c * w);
                    }
                }
                (SchemeId::Block3High, 2) => {
                    let q = 1.0 / (12.0 * s * s);
                    for (o, w) in [(-2, -1.0), (-1, 16.0), (0, -30.0), (1, 16.0), (2, -1.0)] {
                        put(o, q * w);
                    }
                    for (o, w) in [(-3, -1.0), (-2, 5.0), (-1, -10.0), (0, 10.0), (1, -5.0), (2, 1.0)] {
                        put(o, q * c * w);
                    }
                }
                (SchemeId::Block3Low, 1) => {
                    let q = 1.0 / (4.0 * s * s);
                    put(-1, 4.0 * q);
                    put(0, -8.0 * q);
                    put(1, 4.0 * q);
                }
                (SchemeId::Block3Low, 0) => {
                    let q = 1.0 / (4.0 * s * s);
                    put(-1, q * (4.0 - c));
                    put(0, q * (-8.0 + 3.0 * c));
                    put(1, q * (4.0 - 3.0 * c));
                    put(2, q * c);
                }
                (SchemeId::Block3Low, 2) => {
                    let q = 1.0 / (4.0 * s * s);
                    put(-2, q * c);
                    put(-1, q * (4.0 - 3.0 * c));
                    put(0, q * (-8.0 + 3.0 * c));
                    put(1, q * (4.0 - c));
                }
                (SchemeId::Perturbed, _) => {
                    let q = 1.0 / (s * s);
                    put(-1, q);
                    put(0, -2.0 * q + if i % 2 == 0 { c } else { -c });
                    put(1, q);
                }
                _ => unreachable!(),
            }
        }
        a
    }

    fn rel_close(a: &[f64], b: &[f64], tol: f64) -> bool {
        let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
    }

    #[test]
    fn block2_c0_is_plain_second_difference() {
        let op = build_block2(grid(16, 2), 0.0).unwrap();
        assert_eq!(op.rows()[0], vec![(-1, 1.0), (0, -2.0), (1, 1.0)]);
        assert_eq!(op.rows()[1], vec![(-1, 1.0), (0, -2.0), (1, 1.0)]);
        let std = build_standard(grid(34, 1), 2).unwrap();
        assert_eq!(std.grid().len(), op.grid().len());
        assert_abs_diff_eq!(std.scale(), op.scale(), epsilon = 1e-9);
        assert_eq!(std.rows()[0], op.rows()[0]);
    }

    #[test]
    fn block3_c0_rows() {
        let op = build_block3_low(grid(8, 3), 0.0).unwrap();
        for row in op.rows() {
            assert_eq!(row, &vec![(-1, 4.0), (0, -8.0), (1, 4.0)]);
        }
        let op = build_block3_high(grid(8, 3), 0.0).unwrap();
        for row in op.rows() {
            assert_eq!(
                row,
                &vec![(-2, -1.0), (-1, 16.0), (0, -30.0), (1, 16.0), (2, -1.0)]
            );
        }
    }

    #[test]
    fn block3_high_is_compact_at_c1() {
        let op = build_block3_high(grid(8, 3), 1.0).unwrap();
        // u_{j-2/3} on row 0 and u_{j+4/3} on row 2
        assert_eq!(op.coefficient(0, -2), 0.0);
        assert_eq!(op.coefficient(2, 2), 0.0);
        assert!(op.rows()[0].iter().all(|(o, _)| *o != -2));
        assert!(op.rows()[2].iter().all(|(o, _)| *o != 2));
        assert_eq!(op.stencil_cost().points_per_side(), 1);
    }

    #[test]
    fn standard_stencils() {
        let g = grid(16, 1);
        let h = g.h();
        let op2 = build_standard(g, 2).unwrap();
        assert_abs_diff_eq!(op2.scale(), 1.0 / (h * h), epsilon = 1e-12);
        let op4 = build_standard(g, 4).unwrap();
        assert_eq!(op4.rows()[0].iter().map(|t| t.1).collect::<Vec<_>>(), vec![-1.0, 16.0, -30.0, 16.0, -1.0]);
        assert_abs_diff_eq!(op4.scale(), 1.0 / (12.0 * h * h), epsilon = 1e-12);
        let op6 = build_standard(g, 6).unwrap();
        assert_eq!(
            op6.rows()[0].iter().map(|t| t.1).collect::<Vec<_>>(),
            vec![2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]
        );
        assert!(build_standard(g, 8).is_err());
        assert!(build_standard(grid(4, 1), 6).is_err());
    }

    #[test]
    fn wrong_block_size_rejected() {
        assert!(build_perturbed(grid(8, 2), 1.0).is_err());
        assert!(build_block2(grid(8, 1), 0.0).is_err());
        assert!(build_block3_low(grid(8, 2), 0.0).is_err());
        assert!(build_block3_high(grid(8, 1), 0.0).is_err());
        assert!(build_standard(grid(8, 3), 2).is_err());
    }

    #[test]
    fn perturbed_action() {
        let g = grid(32, 1);
        let h = g.h();
        let op = build_perturbed(g, 0.0).unwrap();
        let v = GridFunction::sample(g, f64::cos);
        let out = op.apply(&v).unwrap();
        let lam = -4.0 / (h * h) * (h / 2.0).sin().powi(2);
        for i in 0..g.len() {
            assert_abs_diff_eq!(out.values()[i], lam * g.x(i).cos(), epsilon = 1e-11);
        }
        let op = build_perturbed(g, 1.0).unwrap();
        let out = op.apply(&GridFunction::sample(g, |_| 1.0)).unwrap();
        for (i, v) in out.values().iter().enumerate() {
            assert_eq!(*v, if i % 2 == 0 { 1.0 } else { -1.0 });
        }
    }

    #[test]
    fn perturbed_residual_is_order_one() {
        let g = grid(32, 1);
        let op = build_perturbed(g, 0.5).unwrap();
        let out = op.apply(&GridFunction::sample(g, f64::cos)).unwrap();
        // residual against u_xx = -cos x, minus the small D+D- error
        let dd = build_perturbed(g, 0.0).unwrap().apply(&GridFunction::sample(g, f64::cos)).unwrap();
        for i in 0..g.len() {
            let r = out.values()[i] - dd.values()[i];
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            assert_abs_diff_eq!(r, sign * 0.5 * g.x(i).cos(), epsilon = 1e-11);
            assert!((out.values()[i] + g.x(i).cos()).abs() <= 0.5 + 0.01);
        }
        let amp = (0..g.len())
            .map(|i| (out.values()[i] + g.x(i).cos()).abs())
            .fold(0.0, f64::max);
        assert!(amp > 0.49);
    }

    #[test]
    fn constants_are_annihilated() {
        for c in [-0.385, -0.25, 0.0, 0.3, 1.0, 1.34] {
            for scheme in [SchemeId::Block2, SchemeId::Block3Low, SchemeId::Block3High] {
                let op = scheme.build_on(16, c).unwrap();
                for row in op.rows() {
                    assert!(row.iter().map(|t| t.1).sum::<f64>().abs() < 1e-13);
                }
                let out = op.apply(&GridFunction::sample(*op.grid(), |_| 1.0)).unwrap();
                assert!(out.values().iter().all(|&v| v == 0.0), "{scheme} c={c}");
            }
        }
        for scheme in [SchemeId::Std2, SchemeId::Std4, SchemeId::Std6] {
            let op = scheme.build_on(16, 0.0).unwrap();
            let out = op.apply(&GridFunction::sample(*op.grid(), |_| 1.0)).unwrap();
            assert!(out.values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn apply_matches_independent_dense_matrix() {
        for (scheme, n) in [
            (SchemeId::Block2, 32usize),
            (SchemeId::Block3Low, 20),
            (SchemeId::Block3High, 20),
            (SchemeId::Perturbed, 32),
        ] {
            for c in [0.3, -0.25, 1.0] {
                let op = scheme.build_on(n, c).unwrap();
                let g = *op.grid();
                assert!(g.len() <= 66);
                let dense = oracle_dense(scheme, g, c);
                let mine = op.to_dense();
                let scale = dense.amax();
                assert!((&dense - &mine).amax() <= 1e-13 * scale);

                let v = GridFunction::sample(g, |x| Complex64::new(0.0, x).exp());
                let got = op.apply(&v).unwrap();
                let want = dense.map(|a| Complex64::new(a, 0.0))
                    * nalgebra::DVector::from_column_slice(v.values());
                let err = got
                    .values()
                    .iter()
                    .zip(want.iter())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                let size = want.iter().map(|b| b.norm()).fold(0.0, f64::max).max(scale);
                assert!(err <= 1e-13 * size, "{scheme} c={c}: {err}");
            }
        }
    }

    #[test]
    fn block_shift_equivariance() {
        let op = build_block3_high(grid(16, 3), -0.385).unwrap();
        let g = *op.grid();
        let v: Vec<f64> = (0..g.len()).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
        let out = op.apply(&GridFunction::new(g, v.clone()).unwrap()).unwrap();
        let m = g.block_size();
        let shifted: Vec<f64> = (0..g.len()).map(|i| v[(i + g.len() - m) % g.len()]).collect();
        let out_s = op.apply(&GridFunction::new(g, shifted).unwrap()).unwrap();
        for i in 0..g.len() {
            assert_abs_diff_eq!(out_s.values()[i], out.values()[(i + g.len() - m) % g.len()], epsilon = 1e-9);
        }
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let op = build_block2(grid(16, 2), 0.1).unwrap();
        let v = GridFunction::<f64>::zeros(grid(16, 3));
        assert!(matches!(op.apply(&v), Err(Error::GridMismatch { .. })));
        let z = op.apply(&GridFunction::<f64>::zeros(*op.grid())).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn table_one_costs() {
        let cost = |s: SchemeId, c: f64| s.build_on(16, c).unwrap().stencil_cost();
        let check = |k: StencilCost, side: usize, adds: &str, mults: &str| {
            assert_eq!(k.points_per_side(), side);
            assert_eq!(k.adds.to_string(), adds);
            assert_eq!(k.mults.to_string(), mults);
        };
        check(cost(SchemeId::Std2, 0.0), 1, "2", "3");
        check(cost(SchemeId::Std4, 0.0), 2, "4", "5");
        check(cost(SchemeId::Std6, 0.0), 3, "6", "7");
        check(cost(SchemeId::Block2, -0.25), 1, "3", "4");
        check(cost(SchemeId::Block3Low, 1.34), 1, "2 2/3", "3 2/3");
        check(cost(SchemeId::Block3High, -0.385), 2, "4 2/3", "5 2/3");
        check(cost(SchemeId::Block3High, 1.0), 1, "4", "5");
        check(cost(SchemeId::Perturbed, 1.0), 1, "2", "3");
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in SchemeId::ALL {
            assert_eq!(s.name().parse::<SchemeId>().unwrap(), s);
        }
        assert!("block4".parse::<SchemeId>().is_err());
    }

    #[test]
    fn stencil_table_lists_rows() {
        let t = build_block2(grid(8, 2), -0.25).unwrap().stencil_table();
        assert!(t.contains("row 0 (x_j): [-1] 1.25 [+0] -2.75 [+1] 1.75 [+2] -0.25"));
        assert!(t.contains("row 1"));
    }

    proptest! {
        #[test]
        fn apply_is_linear(
            u in prop::collection::vec(-1.0f64..1.0, 51),
            v in prop::collection::vec(-1.0f64..1.0, 51),
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
            c in -0.5f64..1.5,
        ) {
            let op = build_block3_high(grid(16, 3), c).unwrap();
            let g = *op.grid();
            let lhs_in: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
            let lhs = op.apply(&GridFunction::new(g, lhs_in).unwrap()).unwrap();
            let qu = op.apply(&GridFunction::new(g, u).unwrap()).unwrap();
            let qv = op.apply(&GridFunction::new(g, v).unwrap()).unwrap();
            let rhs: Vec<f64> = qu.values().iter().zip(qv.values()).map(|(x, y)| a * x + b * y).collect();
            prop_assert!(rel_close(lhs.values(), &rhs, 1e-12));
        }
    }
}
