//! Block Fourier symbols of periodic stencil operators.
//!
//! An operator whose stencil repeats every `p` nodes maps the block wave
//! `v_{Jp+k} = a_k e^{iω x_{Jp+k}}` to another block wave of the same `ω`; the
//! `p × p` matrix taking the amplitudes `a` to the new ones is the symbol.
//! Its eigenvalues over all grid wavenumbers are the operator's spectrum.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{BlockGrid, GridFunction};
use crate::operators::StencilOperator;

/// Symbol of an operator at one wavenumber, with its eigen-decomposition.
#[derive(Debug, Clone)]
pub struct BlockSymbol {
    pub omega: i64,
    /// Aliased companion wavenumber (two-point block grids only).
    pub nu: Option<i64>,
    pub matrix: DMatrix<Complex64>,
    /// Sorted by decreasing real part, so the smooth (consistent) branch is first.
    pub eigenvalues: Vec<Complex64>,
    /// Unit-norm block amplitude vectors, matching `eigenvalues`.
    pub eigenvectors: Vec<DVector<Complex64>>,
}

impl BlockSymbol {
    /// Eigenvector `k` written as `(α, β)` coefficients of `e^{iωx}` and
    /// `e^{iνx}`, normalised to `|α|² + |β|² = 1`. Two-point blocks only.
    pub fn alias_coefficients(&self, k: usize) -> Option<(Complex64, Complex64)> {
        if self.eigenvectors[k].len() != 2 || self.nu.is_none() {
            return None;
        }
        let a = &self.eigenvectors[k];
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Some(((a[0] + a[1]) * r, (a[0] - a[1]) * r))
    }

    /// `|⟨ψ₁, ψ₂⟩| / (‖ψ₁‖‖ψ₂‖)` for the first two eigenvectors.
    pub fn cos_angle(&self) -> Option<f64> {
        if self.eigenvectors.len() < 2 {
            return None;
        }
        Some(cos_between(&self.eigenvectors[0], &self.eigenvectors[1]))
    }

    /// Largest pairwise `|cos|` between eigenvectors.
    pub fn max_pairwise_cos(&self) -> f64 {
        let v = &self.eigenvectors;
        let mut worst: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                worst = worst.max(cos_between(&v[i], &v[j]));
            }
        }
        worst
    }

    /// Spectral condition number of the eigenvector matrix.
    pub fn eigenvector_condition(&self) -> f64 {
        let p = self.eigenvectors.len();
        if p < 2 {
            return 1.0;
        }
        let mut m = DMatrix::zeros(p, p);
        for (j, v) in self.eigenvectors.iter().enumerate() {
            m.set_column(j, v);
        }
        let sv = m.singular_values();
        let max = sv.iter().cloned().fold(0.0, f64::max);
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        max / min
    }
}

fn cos_between(a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    a.dotc(b).norm() / (a.norm() * b.norm())
}

/// Aliased wavenumber of `ω` on the two-point block grid with parameter `N`.
pub fn alias_wavenumber(omega: i64, n_res: usize) -> Result<i64> {
    let half = (n_res / 2) as i64;
    if omega.abs() > half {
        return Err(Error::Precondition(format!(
            "wavenumber {omega} outside [-{half}, {half}]"
        )));
    }
    let np1 = n_res as i64 + 1;
    Ok(if omega > 0 { omega - np1 } else { omega + np1 })
}

/// One representative wavenumber per distinct block wave on the operator's grid.
pub fn wavenumbers(op: &StencilOperator) -> Vec<i64> {
    let blocks = (op.grid().len() / op.period()) as i64;
    let lo = -(blocks / 2);
    (lo..lo + blocks).collect()
}

/// Symbol matrix of `op` at wavenumber `omega`.
pub fn symbol_matrix(op: &StencilOperator, omega: i64) -> DMatrix<Complex64> {
    let p = op.period();
    let s = op.grid().sub_spacing();
    let mut m = DMatrix::zeros(p, p);
    for (k, row) in op.rows().iter().enumerate() {
        for &(off, w) in row {
            let col = (k as isize + off).rem_euclid(p as isize) as usize;
            let phase = Complex64::from_polar(1.0, omega as f64 * off as f64 * s);
            m[(k, col)] += phase * (op.scale() * w);
        }
        m[(k, k)] += op.shift()[k];
    }
    m
}

/// Symbol of `op` at `omega` with numerically computed eigenpairs.
pub fn numeric_block_symbol(op: &StencilOperator, omega: i64) -> BlockSymbol {
    let matrix = symbol_matrix(op, omega);
    let (eigenvalues, eigenvectors) = eigen_small(&matrix);
    let grid = op.grid();
    let nu = if grid.block_size() == 2 && omega.abs() <= (grid.n_res() / 2) as i64 {
        alias_wavenumber(omega, grid.n_res()).ok()
    } else {
        None
    };
    BlockSymbol {
        omega,
        nu,
        matrix,
        eigenvalues,
        eigenvectors,
    }
}

/// Symbols at every wavenumber of the grid.
pub fn scan_symbols(op: &StencilOperator) -> Vec<BlockSymbol> {
    wavenumbers(op)
        .into_iter()
        .map(|w| numeric_block_symbol(op, w))
        .collect()
}

/// The block wave `a_k e^{iωx}` on `grid` for amplitudes `a` (length `p`).
pub fn block_wave(grid: BlockGrid, omega: i64, amplitudes: &[Complex64]) -> GridFunction<Complex64> {
    let p = amplitudes.len();
    let values = (0..grid.len())
        .map(|i| amplitudes[i % p] * Complex64::from_polar(1.0, omega as f64 * grid.x(i)))
        .collect();
    GridFunction::new(grid, values).expect("length matches grid")
}

/// Eigenpairs of a small complex matrix, sorted by decreasing real part.
fn eigen_small(m: &DMatrix<Complex64>) -> (Vec<Complex64>, Vec<DVector<Complex64>>) {
    let p = m.nrows();
    if p == 1 {
        return (vec![m[(0, 0)]], vec![DVector::from_element(1, Complex64::new(1.0, 0.0))]);
    }
    let mut vals: Vec<Complex64> = if p == 2 {
        let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let half = (a - d) * 0.5;
        let root = (half * half + b * c).sqrt();
        let mean = (a + d) * 0.5;
        let (l1, l2) = (mean + root, mean - root);
        // recover the smaller root from the determinant to avoid cancellation
        let det = a * d - b * c;
        if l1.norm() >= l2.norm() {
            let small = if l1.norm() > 0.0 { det / l1 } else { l2 };
            vec![l1, small]
        } else {
            vec![det / l2, l2]
        }
    } else {
        let schur = m.clone().schur();
        let (_, t) = schur.unpack();
        (0..p).map(|i| t[(i, i)]).collect()
    };
    vals.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let scale = m.norm().max(1.0);
    let mut vecs: Vec<DVector<Complex64>> = Vec::with_capacity(p);
    let mut i = 0;
    while i < p {
        // eigenvalues equal to round-off share one null-space computation
        let mut j = i + 1;
        while j < p && (vals[j] - vals[i]).norm() <= 1e-10 * scale {
            j += 1;
        }
        vecs.extend(null_vectors(m, vals[i], j - i, 1e-8 * scale));
        i = j;
    }
    (vals, vecs)
}

/// `count` unit vectors from the (numerical) kernel of `m - λI`.
///
/// Right singular vectors beyond the first are used only if their singular
/// value is below `tol`; otherwise the first is repeated, so a defective
/// eigenvalue shows up as a singular eigenvector matrix.
fn null_vectors(
    m: &DMatrix<Complex64>,
    lambda: Complex64,
    count: usize,
    tol: f64,
) -> Vec<DVector<Complex64>> {
    let p = m.nrows();
    let shifted = m - DMatrix::from_diagonal_element(p, p, lambda);
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let unit = |k: usize| {
        let v: DVector<Complex64> = v_t.row(k).adjoint().into_owned();
        let n = v.norm();
        v / Complex64::new(n, 0.0)
    };
    let first = unit(order[0]);
    (0..count)
        .map(|k| {
            if k > 0 && svd.singular_values[order[k]] <= tol {
                unit(order[k])
            } else {
                first.clone()
            }
        })
        .collect()
}
