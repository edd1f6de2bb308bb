//! Convergence studies: evolve a problem over a resolution ladder, measure the
//! final error, fit an order, and write the curves as CSV.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use crate::analysis::order::{fit_order, OrderFit};
use crate::analysis::stability::{stability_scan, StabilityReport};
use crate::analysis::truncation::OrderEstimate;
use crate::error::{Error, Result};
use crate::grid::{BlockGrid, GridFunction, Scalar};
use crate::operators::{SchemeId, StencilOperator};
use crate::postprocess::FilterSpec;
use crate::problems::Problem;
use crate::timestep::{evolve, IntegratorSpec, Method};

pub const DEFAULT_LADDER: [usize; 4] = [32, 64, 128, 256];
pub const FULL_LADDER: [usize; 6] = [32, 64, 128, 256, 512, 1024];

/// Errors below this are treated as round-off and left out of order fits.
pub const ROUND_OFF_FLOOR: f64 = 1e-12;

/// Everything that defines one convergence curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSpec {
    pub scheme: SchemeId,
    pub c: f64,
    pub problem: Problem,
    pub integrator: IntegratorSpec,
    pub t_final: f64,
    pub ladder: Vec<usize>,
    pub floor: f64,
}

impl ConvergenceSpec {
    pub fn new(scheme: SchemeId, c: f64, problem: Problem, method: Method, t_final: f64) -> Self {
        Self {
            scheme,
            c,
            problem,
            integrator: IntegratorSpec::new(method),
            t_final,
            ladder: DEFAULT_LADDER.to_vec(),
            floor: ROUND_OFF_FLOOR,
        }
    }

    pub fn with_ladder(mut self, ladder: &[usize]) -> Self {
        self.ladder = ladder.to_vec();
        self
    }

    pub fn with_safety(mut self, safety: f64) -> Self {
        self.integrator.safety = safety;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.ladder.len() < 3 {
            return Err(Error::Precondition(format!(
                "a convergence ladder needs at least 3 resolutions, got {}",
                self.ladder.len()
            )));
        }
        if self.ladder.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition(format!(
                "ladder must be strictly increasing, got {:?}",
                self.ladder
            )));
        }
        for &n in &self.ladder {
            BlockGrid::new(n, self.scheme.block_size())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_res: usize,
    /// Total grid points.
    pub points: usize,
    pub dt: f64,
    pub steps: usize,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub scheme: SchemeId,
    pub c: f64,
    pub problem: Problem,
    pub integrator: Method,
    pub safety: f64,
    pub t_final: f64,
    pub filter: Option<FilterSpec>,
    pub rows: Vec<ConvergenceRow>,
    pub fit: OrderFit,
    /// Stability scan on the finest grid of the ladder.
    pub stability: StabilityReport,
}

impl ConvergenceReport {
    pub fn fitted_order(&self) -> f64 {
        self.fit.order
    }

    pub fn fit_residual(&self) -> f64 {
        self.fit.residual
    }

    /// Order fitted to the rows with `n_res >= n_min` only.
    pub fn order_above(&self, n_min: usize) -> f64 {
        let rows: Vec<&ConvergenceRow> = self.rows.iter().filter(|r| r.n_res >= n_min).collect();
        let m: Vec<f64> = rows.iter().map(|r| r.points as f64).collect();
        let e: Vec<f64> = rows.iter().map(|r| r.error).collect();
        fit_order(&m, &e, ROUND_OFF_FLOOR).order
    }

    pub fn filter_label(&self) -> String {
        self.filter.map_or_else(|| "none".into(), |f| f.to_string())
    }

    /// Curve CSV: a configuration header, then one row per resolution.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scheme,c,problem,integrator,t_final,safety,filter\n");
        writeln!(
            out,
            "{},{:.16e},{},{},{:.16e},{:.16e},{}",
            self.scheme,
            self.c,
            self.problem,
            self.integrator,
            self.t_final,
            self.safety,
            self.filter_label()
        )
        .unwrap();
        out.push_str("N,M,dt,error,log10M,log10error\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.n_res,
                r.points,
                r.dt,
                r.error,
                (r.points as f64).log10(),
                r.error.log10()
            )
            .unwrap();
        }
        out
    }
}

/// Short decimal form of `c` for file names.
pub fn c_label(c: f64) -> String {
    let s = format!("{c:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Builds the operator at every rung and rejects the configuration if any
/// rung fails the stability scan.
fn stable_operators(spec: &ConvergenceSpec) -> Result<(Vec<StencilOperator>, StabilityReport)> {
    let mut ops = Vec::with_capacity(spec.ladder.len());
    let mut last = None;
    for &n in &spec.ladder {
        let op = spec.scheme.build_on(n, spec.c)?;
        let (report, _) = stability_scan(&op);
        if !report.stable {
            return Err(Error::Unstable(report.summary()));
        }
        last = Some(report);
        ops.push(op);
    }
    Ok((ops, last.expect("ladder is non-empty")))
}

fn solve<T: Scalar>(op: &StencilOperator, spec: &ConvergenceSpec) -> Result<(GridFunction<T>, f64, usize)> {
    let grid = *op.grid();
    let v0 = spec.problem.initial::<T>(grid);
    let forcing = spec.problem.grid_forcing(grid);
    let r = evolve(op, &forcing, &v0, spec.t_final, &spec.integrator)?;
    Ok((r.final_state, r.dt_used, r.steps_taken))
}

fn filtered_errors<T: Scalar>(
    v: &GridFunction<T>,
    exact: &GridFunction<T>,
    filters: &[Option<FilterSpec>],
) -> Result<Vec<f64>> {
    filters
        .iter()
        .map(|f| {
            let w = match f {
                Some(f) => f.apply(v)?,
                None => v.clone(),
            };
            Ok(w.sub(exact)?.l2_norm())
        })
        .collect()
}

/// Runs one evolution per rung and scores the final state under each filter,
/// returning one report per entry of `filters`.
pub fn run_convergence_filters(
    spec: &ConvergenceSpec,
    filters: &[Option<FilterSpec>],
) -> Result<Vec<ConvergenceReport>> {
    spec.validate()?;
    for f in filters.iter().flatten() {
        f.validate()?;
    }
    let (ops, stability) = stable_operators(spec)?;
    let mut rows: Vec<Vec<ConvergenceRow>> = vec![Vec::new(); filters.len()];
    for (op, &n) in ops.iter().zip(&spec.ladder) {
        let grid = *op.grid();
        let (errors, dt, steps) = if spec.problem.is_real() {
            let (v, dt, steps) = solve::<f64>(op, spec)?;
            let exact = spec.problem.sample_exact(grid, spec.t_final);
            (filtered_errors(&v, &exact, filters)?, dt, steps)
        } else {
            let (v, dt, steps) = solve::<Complex64>(op, spec)?;
            let exact = spec.problem.sample_exact(grid, spec.t_final);
            (filtered_errors(&v, &exact, filters)?, dt, steps)
        };
        for (k, error) in errors.into_iter().enumerate() {
            rows[k].push(ConvergenceRow {
                n_res: n,
                points: grid.len(),
                dt,
                steps,
                error,
            });
        }
    }
    Ok(filters
        .iter()
        .zip(rows)
        .map(|(filter, rows)| {
            let m: Vec<f64> = rows.iter().map(|r| r.points as f64).collect();
            let e: Vec<f64> = rows.iter().map(|r| r.error).collect();
            ConvergenceReport {
                scheme: spec.scheme,
                c: spec.c,
                problem: spec.problem,
                integrator: spec.integrator.method,
                safety: spec.integrator.safety,
                t_final: spec.t_final,
                filter: *filter,
                fit: fit_order(&m, &e, spec.floor),
                rows,
                stability: stability.clone(),
            }
        })
        .collect())
}

pub fn run_convergence(spec: &ConvergenceSpec) -> Result<ConvergenceReport> {
    Ok(run_convergence_filters(spec, &[None])?.remove(0))
}

/// Like [`run_convergence`], with `filter` applied once to each final state.
pub fn filtered_convergence(spec: &ConvergenceSpec, filter: FilterSpec) -> Result<ConvergenceReport> {
    Ok(run_convergence_filters(spec, &[Some(filter)])?.remove(0))
}

/// Number of interior time samples used to estimate `max_τ ‖T_e(τ)‖`.
pub const TRUNCATION_TIME_SAMPLES: usize = 16;

/// `max_τ ‖u_xx(τ) - Q u(τ)‖` over `[0, t_final]` on every rung of `ladder`.
pub fn problem_truncation(
    scheme: SchemeId,
    c: f64,
    problem: Problem,
    t_final: f64,
    ladder: &[usize],
) -> Result<OrderEstimate> {
    let mut norms = Vec::with_capacity(ladder.len());
    let mut points = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let op = scheme.build_on(n, c)?;
        let grid = *op.grid();
        let mut worst: f64 = 0.0;
        for k in 0..=TRUNCATION_TIME_SAMPLES {
            let t = t_final * k as f64 / TRUNCATION_TIME_SAMPLES as f64;
            let u = problem.sample_exact::<Complex64>(grid, t);
            let uxx = problem.sample_exact_xx::<Complex64>(grid, t);
            worst = worst.max(uxx.sub(&op.apply(&u)?)?.l2_norm());
        }
        norms.push(worst);
        points.push(grid.len() as f64);
    }
    let fit = fit_order(&points, &norms, 0.0);
    Ok(OrderEstimate {
        observed_order: fit.order,
        resolutions: ladder.to_vec(),
        residual_norms: norms,
        fit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub n_res: usize,
    pub error: f64,
    pub max_truncation: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    /// Growth rate in the energy estimate: `|c|` for the perturbed scheme, `0` otherwise.
    pub alpha: f64,
    pub rows: Vec<BoundRow>,
    pub holds: bool,
    pub error_order: f64,
    pub truncation_order: f64,
    /// `error_order - truncation_order`.
    pub gap: f64,
}

/// Compares measured errors against `(e^{αt} - 1)/α · max‖T_e‖`.
pub fn error_bound_check(report: &ConvergenceReport, truncation: &OrderEstimate) -> Result<BoundCheck> {
    let ns: Vec<usize> = report.rows.iter().map(|r| r.n_res).collect();
    if ns != truncation.resolutions {
        return Err(Error::Precondition(format!(
            "resolutions differ: report {ns:?}, truncation {:?}",
            truncation.resolutions
        )));
    }
    let alpha = if report.scheme == SchemeId::Perturbed {
        report.c.abs()
    } else {
        0.0
    };
    let t = report.t_final;
    let growth = if alpha > 0.0 {
        ((alpha * t).exp() - 1.0) / alpha
    } else {
        t
    };
    let rows: Vec<BoundRow> = report
        .rows
        .iter()
        .zip(&truncation.residual_norms)
        .map(|(r, te)| BoundRow {
            n_res: r.n_res,
            error: r.error,
            max_truncation: *te,
            bound: growth * te,
        })
        .collect();
    let holds = rows.iter().all(|r| r.error <= r.bound);
    Ok(BoundCheck {
        alpha,
        holds,
        rows,
        error_order: report.fitted_order(),
        truncation_order: truncation.observed_order,
        gap: report.fitted_order() - truncation.observed_order,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig3,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig3,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FigureId::Fig1a => "1a",
            FigureId::Fig1b => "1b",
            FigureId::Fig2a => "2a",
            FigureId::Fig2b => "2b",
            FigureId::Fig3 => "3",
        }
    }

    /// Scheme, parameter values, problem, integrator and final time.
    pub fn setup(self) -> FigureSetup {
        use std::f64::consts::PI;
        let (scheme, cs, problem, method, t_final) = match self {
            FigureId::Fig1a => (
                SchemeId::Perturbed,
                vec![0.0, 0.5, 1.0],
                Problem::DecayingCosine,
                Method::ForwardEuler,
                2.0 * PI,
            ),
            FigureId::Fig1b => (
                SchemeId::Block2,
                vec![0.0, 1.0 / 6.0, -1.0 / 6.0, -0.25],
                Problem::ExpCos,
                Method::Rk4,
                1.0,
            ),
            FigureId::Fig2a => (SchemeId::Block3Low, vec![0.0, 1.34], Problem::ExpCos, Method::Rk4, 1.0),
            FigureId::Fig2b => (SchemeId::Block3High, vec![0.0, -0.385], Problem::ExpCos, Method::Rk6, 1.0),
            FigureId::Fig3 => (SchemeId::Block2, vec![-0.25], Problem::ExpCos, Method::Rk4, 1.0),
        };
        let filters = match self {
            FigureId::Fig3 => vec![None, Some(FilterSpec::spectral()), Some(FilterSpec::local())],
            _ => vec![None],
        };
        FigureSetup {
            scheme,
            cs,
            problem,
            method,
            t_final,
            filters,
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim_start_matches("fig");
        FigureId::ALL
            .into_iter()
            .find(|f| f.label() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "figure",
                name: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSetup {
    pub scheme: SchemeId,
    pub cs: Vec<f64>,
    pub problem: Problem,
    pub method: Method,
    pub t_final: f64,
    pub filters: Vec<Option<FilterSpec>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    pub ladder: Vec<usize>,
    pub t_final: Option<f64>,
    pub safety: f64,
    /// Replaces the figure's default integrator.
    pub method: Option<Method>,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            ladder: DEFAULT_LADDER.to_vec(),
            t_final: None,
            safety: IntegratorSpec::new(Method::Rk4).safety,
            method: None,
        }
    }
}

impl FigureOptions {
    pub fn full() -> Self {
        Self {
            ladder: FULL_LADDER.to_vec(),
            ..Self::default()
        }
    }
}

/// One report per curve of the figure, in the order of its parameter values
/// (and, for the filter figure, unfiltered / spectral / local).
pub fn reproduce_figure(id: FigureId, opts: &FigureOptions) -> Result<Vec<ConvergenceReport>> {
    let setup = id.setup();
    let mut out = Vec::new();
    for &c in &setup.cs {
        let spec = ConvergenceSpec::new(
            setup.scheme,
            c,
            setup.problem,
            opts.method.unwrap_or(setup.method),
            opts.t_final.unwrap_or(setup.t_final),
        )
        .with_ladder(&opts.ladder)
        .with_safety(opts.safety);
        out.extend(run_convergence_filters(&spec, &setup.filters)?);
    }
    Ok(out)
}

/// `fig<id>_c<value>.csv`, with the filter label appended for filtered curves.
pub fn curve_file_name(id: FigureId, report: &ConvergenceReport) -> String {
    match report.filter {
        Some(f) => format!("fig{id}_c{}_{}.csv", c_label(report.c), f.label()),
        None if id == FigureId::Fig3 => format!("fig{id}_c{}_none.csv", c_label(report.c)),
        None => format!("fig{id}_c{}.csv", c_label(report.c)),
    }
}

pub fn summary_csv(id: FigureId, reports: &[ConvergenceReport]) -> String {
    let mut out = String::from(
        "figure,scheme,c,problem,integrator,filter,t_final,fitted_order,fit_residual,points_used\n",
    );
    for r in reports {
        writeln!(
            out,
            "{id},{},{:.16e},{},{},{},{:.16e},{:.16e},{:.16e},{}",
            r.scheme,
            r.c,
            r.problem,
            r.integrator,
            r.filter_label(),
            r.t_final,
            r.fitted_order(),
            r.fit_residual(),
            r.fit.used.len()
        )
        .unwrap();
    }
    out
}

/// Writes one CSV per curve plus `fig<id>_summary.csv` into `dir`.
pub fn write_figure(dir: &Path, id: FigureId, reports: &[ConvergenceReport]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for r in reports {
        let p = dir.join(curve_file_name(id, r));
        fs::write(&p, r.to_csv())?;
        paths.push(p);
    }
    let p = dir.join(format!("fig{id}_summary.csv"));
    fs::write(&p, summary_csv(id, reports))?;
    paths.push(p);
    Ok(paths)
}
