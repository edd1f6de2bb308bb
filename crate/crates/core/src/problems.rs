//! Manufactured solutions of `u_t = u_xx + F(x, t)` on the periodic domain.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{BlockGrid, GridFunction, Scalar};
use crate::timestep::Forcing;

/// A heat-equation problem with known exact solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Problem {
    /// `u = e^{-t} cos x`, `F = 0`.
    DecayingCosine,
    /// `u = e^{cos(x - t)}` with the matching source term.
    ExpCos,
    /// `u = e^{-ω²t} e^{iωx}`, `F = 0`.
    SingleMode(i64),
}

pub fn problem_decaying_cosine() -> Problem {
    Problem::DecayingCosine
}

pub fn problem_exp_cos() -> Problem {
    Problem::ExpCos
}

pub fn problem_single_mode(omega: i64) -> Problem {
    Problem::SingleMode(omega)
}

impl Problem {
    pub fn name(&self) -> String {
        match self {
            Problem::DecayingCosine => "decaying-cosine".into(),
            Problem::ExpCos => "exp-cos".into(),
            Problem::SingleMode(w) => format!("mode:{w}"),
        }
    }

    /// Whether the exact solution is real-valued.
    pub fn is_real(&self) -> bool {
        !matches!(self, Problem::SingleMode(w) if *w != 0)
    }

    pub fn has_forcing(&self) -> bool {
        matches!(self, Problem::ExpCos)
    }

    pub fn exact(&self, x: f64, t: f64) -> Complex64 {
        match *self {
            Problem::DecayingCosine => Complex64::new((-t).exp() * x.cos(), 0.0),
            Problem::ExpCos => Complex64::new((x - t).cos().exp(), 0.0),
            Problem::SingleMode(w) => {
                let w = w as f64;
                Complex64::from_polar((-w * w * t).exp(), w * x)
            }
        }
    }

    /// `u_xx` of the exact solution.
    pub fn exact_xx(&self, x: f64, t: f64) -> Complex64 {
        match *self {
            Problem::DecayingCosine => -self.exact(x, t),
            Problem::ExpCos => {
                let (s, c) = (x - t).sin_cos();
                Complex64::new((s * s - c) * c.exp(), 0.0)
            }
            Problem::SingleMode(w) => self.exact(x, t) * -((w * w) as f64),
        }
    }

    /// `F = u_t - u_xx`.
    pub fn forcing(&self, x: f64, t: f64) -> Complex64 {
        match *self {
            Problem::ExpCos => {
                let (s, c) = (x - t).sin_cos();
                Complex64::new((s + c - s * s) * c.exp(), 0.0)
            }
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn initial<T: Scalar>(&self, grid: BlockGrid) -> GridFunction<T> {
        self.sample_exact(grid, 0.0)
    }

    pub fn sample_exact<T: Scalar>(&self, grid: BlockGrid, t: f64) -> GridFunction<T> {
        GridFunction::sample(grid, |x| T::from_complex(self.exact(x, t)))
    }

    pub fn sample_exact_xx<T: Scalar>(&self, grid: BlockGrid, t: f64) -> GridFunction<T> {
        GridFunction::sample(grid, |x| T::from_complex(self.exact_xx(x, t)))
    }

    /// Grid sampler for the source term.
    pub fn grid_forcing(&self, grid: BlockGrid) -> GridForcing {
        GridForcing::new(*self, grid)
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::Unknown {
            kind: "problem",
            name: s.to_string(),
        };
        match s {
            "decaying-cosine" => Ok(Problem::DecayingCosine),
            "exp-cos" => Ok(Problem::ExpCos),
            _ => {
                let w = s.strip_prefix("mode:").ok_or_else(unknown)?;
                w.trim().parse().map(Problem::SingleMode).map_err(|_| unknown())
            }
        }
    }
}

/// Source term on a fixed grid, with `sin x` and `cos x` tabulated once.
pub struct GridForcing {
    problem: Problem,
    sin_x: Vec<f64>,
    cos_x: Vec<f64>,
}

impl GridForcing {
    pub fn new(problem: Problem, grid: BlockGrid) -> Self {
        let (sin_x, cos_x) = grid.coordinates().iter().map(|x| x.sin_cos()).unzip();
        Self {
            problem,
            sin_x,
            cos_x,
        }
    }
}

impl<T: Scalar> Forcing<T> for GridForcing {
    fn eval(&self, t: f64, out: &mut [T]) {
        if !self.problem.has_forcing() {
            out.fill(T::default());
            return;
        }
        let (st, ct) = t.sin_cos();
        for ((o, sx), cx) in out.iter_mut().zip(&self.sin_x).zip(&self.cos_x) {
            // sin and cos of x - t
            let s = sx * ct - cx * st;
            let c = cx * ct + sx * st;
            *o = T::from_real((s + c - s * s) * c.exp());
        }
    }
}
