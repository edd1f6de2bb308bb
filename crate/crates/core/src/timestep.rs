//! Fixed-step explicit Runge–Kutta integration of `dv/dt = Qv + F(t)`.
//!
//! The step is chosen from the operator's spectral radius and the length of
//! the method's stability interval on the negative real axis, scaled by a
//! safety factor. The number of steps is rounded up so that a uniform step
//! lands exactly on `t_final`.

use std::fmt;
use std::str::FromStr;

use crate::analysis::symbol::scan_symbols;
use crate::error::{Error, Result};
use crate::grid::{GridFunction, Scalar};
use crate::operators::{SchemeId, StencilOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ForwardEuler,
    Rk4,
    Rk6,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ForwardEuler => "euler",
            Method::Rk4 => "rk4",
            Method::Rk6 => "rk6",
        }
    }

    pub fn order(self) -> usize {
        match self {
            Method::ForwardEuler => 1,
            Method::Rk4 => 4,
            Method::Rk6 => 6,
        }
    }

    pub fn tableau(self) -> Tableau {
        match self {
            Method::ForwardEuler => Tableau {
                a: vec![vec![]],
                b: vec![1.0],
                c: vec![0.0],
            },
            Method::Rk4 => Tableau {
                a: vec![vec![], vec![0.5], vec![0.0, 0.5], vec![0.0, 0.0, 1.0]],
                b: vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
                c: vec![0.0, 0.5, 0.5, 1.0],
            },
            // Butcher's seven-stage sixth-order method.
            Method::Rk6 => Tableau {
                a: vec![
                    vec![],
                    vec![1.0 / 3.0],
                    vec![0.0, 2.0 / 3.0],
                    vec![1.0 / 12.0, 1.0 / 3.0, -1.0 / 12.0],
                    vec![-1.0 / 16.0, 9.0 / 8.0, -3.0 / 16.0, -3.0 / 8.0],
                    vec![0.0, 9.0 / 8.0, -3.0 / 8.0, -3.0 / 4.0, 1.0 / 2.0],
                    vec![
                        9.0 / 44.0,
                        -9.0 / 11.0,
                        63.0 / 44.0,
                        18.0 / 11.0,
                        0.0,
                        -16.0 / 11.0,
                    ],
                ],
                b: vec![
                    11.0 / 120.0,
                    0.0,
                    27.0 / 40.0,
                    27.0 / 40.0,
                    -4.0 / 15.0,
                    -4.0 / 15.0,
                    11.0 / 120.0,
                ],
                c: vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 1.0 / 2.0, 1.0 / 2.0, 1.0],
            },
        }
    }

    /// Length of the stability interval `[-L, 0]` on the negative real axis.
    pub fn stability_limit(self) -> f64 {
        self.tableau().real_stability_limit()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euler" | "forward-euler" => Ok(Method::ForwardEuler),
            "rk4" => Ok(Method::Rk4),
            "rk6" => Ok(Method::Rk6),
            _ => Err(Error::Unknown {
                kind: "integrator",
                name: s.to_string(),
            }),
        }
    }
}

/// Explicit Butcher tableau; `a[i]` holds the `i` coefficients of stage `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tableau {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl Tableau {
    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// Coefficients `g_k = bᵀ A^{k-1} 1` of the stability polynomial
    /// `R(z) = 1 + Σ_k g_k z^k`.
    pub fn stability_polynomial(&self) -> Vec<f64> {
        let s = self.stages();
        let mut coeffs = vec![1.0];
        let mut v = vec![1.0; s];
        for _ in 0..s {
            coeffs.push(self.b.iter().zip(&v).map(|(b, x)| b * x).sum());
            let next: Vec<f64> = (0..s)
                .map(|i| self.a[i].iter().zip(&v).map(|(a, x)| a * x).sum())
                .collect();
            v = next;
        }
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        coeffs
    }

    pub fn real_stability_limit(&self) -> f64 {
        let poly = self.stability_polynomial();
        let r = |y: f64| poly.iter().rev().fold(0.0, |acc, g| acc * -y + g);
        let unstable = |y: f64| r(y).abs() > 1.0 + 1e-13;
        let step = 1e-3;
        let mut y = step;
        while !unstable(y) {
            y += step;
            if y > 100.0 {
                return f64::INFINITY;
            }
        }
        let (mut lo, mut hi) = (y - step, y);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if unstable(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorSpec {
    pub method: Method,
    pub safety: f64,
    pub dt_override: Option<f64>,
}

impl IntegratorSpec {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            safety: 0.5,
            dt_override: None,
        }
    }

    pub fn with_safety(mut self, safety: f64) -> Self {
        self.safety = safety;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt_override = Some(dt);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(Error::Precondition(format!(
                "safety must lie in (0, 1], got {}",
                self.safety
            )));
        }
        if let Some(dt) = self.dt_override {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::Precondition(format!("dt must be positive, got {dt}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionResult<T> {
    pub final_state: GridFunction<T>,
    pub steps_taken: usize,
    pub dt_used: f64,
}

/// Source term sampled on the grid at time `t`.
pub trait Forcing<T> {
    fn eval(&self, t: f64, out: &mut [T]);
}

/// `F ≡ 0`.
pub struct NoForcing;

impl<T: Scalar> Forcing<T> for NoForcing {
    fn eval(&self, _t: f64, out: &mut [T]) {
        out.fill(T::default());
    }
}

impl<T, F> Forcing<T> for F
where
    F: Fn(f64, &mut [T]),
{
    fn eval(&self, t: f64, out: &mut [T]) {
        self(t, out)
    }
}

/// Largest eigenvalue magnitude of the operator's symbol over all grid wavenumbers.
pub fn max_symbol_magnitude(op: &StencilOperator) -> f64 {
    if op.scheme() == SchemeId::Perturbed {
        let h = op.grid().h();
        return 4.0 / (h * h) + op.c().abs();
    }
    scan_symbols(op)
        .iter()
        .flat_map(|s| s.eigenvalues.iter().map(|l| l.norm()))
        .fold(0.0, f64::max)
}

/// Step size the policy would use for `op` (before rounding to hit `t_final`).
pub fn stable_dt(op: &StencilOperator, spec: &IntegratorSpec) -> f64 {
    spec.dt_override.unwrap_or_else(|| {
        spec.safety * spec.method.stability_limit() / max_symbol_magnitude(op)
    })
}

/// Advances `v0` to `t_final` under `dv/dt = Qv + F(t)`.
pub fn evolve<T: Scalar>(
    op: &StencilOperator,
    forcing: &dyn Forcing<T>,
    v0: &GridFunction<T>,
    t_final: f64,
    spec: &IntegratorSpec,
) -> Result<EvolutionResult<T>> {
    spec.validate()?;
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::Precondition(format!(
            "t_final must be finite and non-negative, got {t_final}"
        )));
    }
    if v0.values().len() != op.grid().len() {
        return Err(Error::GridMismatch {
            expected: op.grid().len(),
            found: v0.values().len(),
        });
    }
    if t_final == 0.0 {
        return Ok(EvolutionResult {
            final_state: v0.clone(),
            steps_taken: 0,
            dt_used: 0.0,
        });
    }
    let dt_max = stable_dt(op, spec);
    let steps = (t_final / dt_max).ceil().max(1.0) as usize;
    let dt = t_final / steps as f64;

    let mut state = v0.values().to_vec();
    let mut stepper = RkStepper::new(spec.method.tableau(), state.len());
    let mut fbuf = vec![T::default(); state.len()];
    let mut rhs = |t: f64, y: &[T], out: &mut [T]| {
        op.apply_into(y, out);
        forcing.eval(t, &mut fbuf);
        for (o, f) in out.iter_mut().zip(&fbuf) {
            *o += *f;
        }
    };
    for n in 0..steps {
        let t = n as f64 * dt;
        stepper.step(&mut rhs, t, dt, &mut state);
        if !state.iter().all(|v| v.is_finite()) {
            return Err(Error::BlowUp {
                time: t + dt,
                steps: n + 1,
            });
        }
    }
    Ok(EvolutionResult {
        final_state: GridFunction::new(*op.grid(), state)?,
        steps_taken: steps,
        dt_used: dt,
    })
}

/// Reusable stage storage for one explicit RK method.
pub struct RkStepper<T> {
    tableau: Tableau,
    k: Vec<Vec<T>>,
    stage: Vec<T>,
}

impl<T: Scalar> RkStepper<T> {
    pub fn new(tableau: Tableau, len: usize) -> Self {
        let s = tableau.stages();
        Self {
            tableau,
            k: vec![vec![T::default(); len]; s],
            stage: vec![T::default(); len],
        }
    }

    pub fn step(&mut self, rhs: &mut impl FnMut(f64, &[T], &mut [T]), t: f64, dt: f64, y: &mut [T]) {
        let s = self.tableau.stages();
        for i in 0..s {
            self.stage.copy_from_slice(y);
            for (j, &a) in self.tableau.a[i].iter().enumerate() {
                if a != 0.0 {
                    let w = dt * a;
                    for (st, kj) in self.stage.iter_mut().zip(&self.k[j]) {
                        *st += *kj * w;
                    }
                }
            }
            rhs(t + self.tableau.c[i] * dt, &self.stage, &mut self.k[i]);
        }
        for (i, &b) in self.tableau.b.iter().enumerate() {
            if b != 0.0 {
                let w = dt * b;
                for (yv, ki) in y.iter_mut().zip(&self.k[i]) {
                    *yv += *ki * w;
                }
            }
        }
    }
}

/// Observed order of `method` on `y' = -y + sin t`, `y(0) = 1`, over `[0, 1]`
/// at `dt ∈ {1/20, 1/40, 1/80}`.
pub fn ode_order_selftest(method: Method) -> f64 {
    let exact = |t: f64| 1.5 * (-t).exp() + 0.5 * (t.sin() - t.cos());
    let tab = method.tableau();
    let stages = tab.b.len();
    let mut dts = Vec::new();
    let mut errs = Vec::new();
    for n in [20usize, 40, 80] {
        let dt = 1.0 / n as f64;
        // compensated state keeps accumulated rounding below the truncation error
        let (mut y, mut comp) = (1.0f64, 0.0f64);
        let mut k = vec![0.0; stages];
        for i in 0..n {
            let t = i as f64 * dt;
            for s in 0..stages {
                let ys = y + comp + dt * tab.a[s].iter().zip(&k).map(|(a, k)| a * k).sum::<f64>();
                k[s] = -ys + (t + tab.c[s] * dt).sin();
            }
            let incr = dt * tab.b.iter().zip(&k).map(|(b, k)| b * k).sum::<f64>() + comp;
            let next = y + incr;
            comp = incr - (next - y);
            y = next;
        }
        dts.push(dt);
        errs.push((y + comp - exact(1.0)).abs());
    }
    let xs: Vec<f64> = dts.iter().map(|d| d.log10()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.log10()).collect();
    crate::analysis::order::least_squares_slope(&xs, &ys).0
}
