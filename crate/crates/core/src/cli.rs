//! Command-line front end.
//!
//! Exit codes: 0 success, 2 unparsable arguments, 3 violated precondition,
//! 4 instability or blow-up, 5 file-system failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::analysis::stability::{stability_scan, symbol_scan_csv};
use crate::error::{Error, Result};
use crate::experiments::{
    c_label, error_bound_check, problem_truncation, reproduce_figure, run_convergence_filters,
    summary_csv, write_figure, ConvergenceReport, ConvergenceSpec, FigureId, FigureOptions,
    DEFAULT_LADDER, FULL_LADDER,
};
use crate::grid::{BlockGrid, GridFunction, Scalar};
use crate::operators::{SchemeId, StencilOperator};
use crate::postprocess::{parse_filter, FilterSpec};
use crate::problems::Problem;
use crate::timestep::{evolve, IntegratorSpec, Method};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;
pub const EXIT_IO: i32 = 5;

/// Block finite-difference schemes for the periodic heat equation.
#[derive(Debug, Parser)]
#[command(name = "blockfd", version, about)]
pub struct Cli {
    /// Directory for CSV output.
    #[arg(long, global = true, env = "BLOCKFD_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one configuration and write the final solution.
    Run(RunArgs),
    /// Convergence study over a resolution ladder.
    Converge(ConvergeArgs),
    /// Reproduce a convergence figure (1a, 1b, 2a, 2b, 3).
    Figure(FigureArgs),
    /// Scan the Fourier symbol and report stability.
    Symbol(SymbolArgs),
    /// Compare post-processing filters on one configuration.
    FilterStudy(FilterStudyArgs),
    /// Print stencil reach and operation counts for every scheme.
    CostTable,
}

#[derive(Debug, Args, Clone)]
pub struct SchemeArgs {
    /// perturbed, block2, block3-low, block3-high, std2, std4 or std6.
    #[arg(long, default_value = "block2")]
    pub scheme: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
}

#[derive(Debug, Args, Clone)]
pub struct EvolveArgs {
    /// decaying-cosine, exp-cos or mode:<ω>.
    #[arg(long, default_value = "exp-cos")]
    pub problem: String,
    /// euler, rk4 or rk6; defaults to the method used for the scheme's figure.
    #[arg(long)]
    pub integrator: Option<String>,
    #[arg(long = "t")]
    pub t_final: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub safety: f64,
    /// none, spectral[:cutoff] or local[:order[,support]].
    #[arg(long, default_value = "none")]
    pub filter: String,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    pub evolve: EvolveArgs,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Fixed time step instead of the stability-based one.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Output file; defaults to a name derived from the configuration.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    pub evolve: EvolveArgs,
    /// Comma-separated resolutions.
    #[arg(long, value_delimiter = ',')]
    pub ladder: Option<Vec<usize>>,
    /// Use the 32..1024 ladder.
    #[arg(long)]
    pub full: bool,
    /// Also compare the error against the truncation-error bound.
    #[arg(long)]
    pub bound: bool,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    pub id: String,
    #[arg(long)]
    pub full: bool,
    #[arg(long, value_delimiter = ',')]
    pub ladder: Option<Vec<usize>>,
    #[arg(long = "t")]
    pub t_final: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub safety: f64,
}

#[derive(Debug, Args)]
pub struct SymbolArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct FilterStudyArgs {
    #[arg(long, default_value = "block2")]
    pub scheme: String,
    #[arg(long, default_value_t = -0.25, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value = "exp-cos")]
    pub problem: String,
    #[arg(long)]
    pub integrator: Option<String>,
    #[arg(long = "t", default_value_t = 1.0)]
    pub t_final: f64,
    #[arg(long, default_value_t = 0.5)]
    pub safety: f64,
    /// Filters to compare; the unfiltered curve is always included.
    #[arg(long = "filter", default_values = ["spectral", "local"])]
    pub filters: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub ladder: Option<Vec<usize>>,
    #[arg(long)]
    pub full: bool,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unknown { .. } => EXIT_PARSE,
        Error::InvalidGrid(_)
        | Error::BlockSizeMismatch { .. }
        | Error::GridMismatch { .. }
        | Error::Precondition(_)
        | Error::FilterConfig(_) => EXIT_PRECONDITION,
        Error::Unstable(_) | Error::BlowUp { .. } => EXIT_NUMERICAL,
        Error::Io(_) => EXIT_IO,
    }
}

/// Parses `args` (including the program name), runs the command, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    let out = &cli.out_dir;
    match &cli.command {
        Command::Run(a) => cmd_run(a, out),
        Command::Converge(a) => cmd_converge(a, out),
        Command::Figure(a) => cmd_figure(a, out),
        Command::Symbol(a) => cmd_symbol(a, out),
        Command::FilterStudy(a) => cmd_filter_study(a, out),
        Command::CostTable => {
            print!("{}", cost_table());
            Ok(())
        }
    }
}

/// Integrator used for a scheme unless one is given.
pub fn default_method(scheme: SchemeId) -> Method {
    match scheme {
        SchemeId::Perturbed => Method::ForwardEuler,
        SchemeId::Block3High | SchemeId::Std6 => Method::Rk6,
        _ => Method::Rk4,
    }
}

/// Final time used for a scheme unless one is given.
pub fn default_t_final(scheme: SchemeId) -> f64 {
    match scheme {
        SchemeId::Perturbed => 2.0 * std::f64::consts::PI,
        _ => 1.0,
    }
}

struct Resolved {
    scheme: SchemeId,
    c: f64,
    problem: Problem,
    method: Method,
    t_final: f64,
    safety: f64,
    filter: Option<FilterSpec>,
}

fn resolve(s: &SchemeArgs, e: &EvolveArgs) -> Result<Resolved> {
    let scheme: SchemeId = s.scheme.parse()?;
    let method = match &e.integrator {
        Some(m) => m.parse()?,
        None => default_method(scheme),
    };
    Ok(Resolved {
        scheme,
        c: s.c,
        problem: e.problem.parse()?,
        method,
        t_final: e.t_final.unwrap_or_else(|| default_t_final(scheme)),
        safety: e.safety,
        filter: parse_filter(&e.filter)?,
    })
}

fn ensure_stable(op: &StencilOperator) -> Result<()> {
    let (report, _) = stability_scan(op);
    if report.stable {
        Ok(())
    } else {
        Err(Error::Unstable(report.summary()))
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

fn run_header(r: &Resolved, n: usize, dt: f64, steps: usize) -> String {
    let filter = r.filter.map_or_else(|| "none".into(), |f| f.to_string());
    format!(
        "# scheme={} c={:.16e} problem={} integrator={} n={} t_final={:.16e} safety={:.16e} filter={} dt={:.16e} steps={}\n",
        r.scheme, r.c, r.problem, r.method, n, r.t_final, r.safety, filter, dt, steps
    )
}

fn solution_csv<T: Scalar>(v: &GridFunction<T>, exact: &GridFunction<T>, complex: bool) -> String {
    let grid = v.grid();
    let mut out = if complex {
        String::from("x,v_re,v_im,exact_re,exact_im,error\n")
    } else {
        String::from("x,v,exact,error\n")
    };
    for (i, (a, b)) in v.values().iter().zip(exact.values()).enumerate() {
        let (a, b) = (a.to_complex(), b.to_complex());
        let err = (a - b).norm();
        if complex {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                grid.x(i),
                a.re,
                a.im,
                b.re,
                b.im,
                err
            )
            .unwrap();
        } else {
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", grid.x(i), a.re, b.re, err).unwrap();
        }
    }
    out
}

struct RunOutcome {
    csv: String,
    error: f64,
    dt: f64,
    steps: usize,
}

fn run_typed<T: Scalar>(
    r: &Resolved,
    op: &StencilOperator,
    spec: &IntegratorSpec,
    complex: bool,
) -> Result<RunOutcome> {
    let grid: BlockGrid = *op.grid();
    let v0 = r.problem.initial::<T>(grid);
    let forcing = r.problem.grid_forcing(grid);
    let res = evolve(op, &forcing, &v0, r.t_final, spec)?;
    let v = match r.filter {
        Some(f) => f.apply(&res.final_state)?,
        None => res.final_state,
    };
    let exact = r.problem.sample_exact::<T>(grid, r.t_final);
    let error = v.sub(&exact)?.l2_norm();
    Ok(RunOutcome {
        csv: solution_csv(&v, &exact, complex),
        error,
        dt: res.dt_used,
        steps: res.steps_taken,
    })
}

pub fn cmd_run(a: &RunArgs, out_dir: &Path) -> Result<()> {
    let r = resolve(&a.scheme, &a.evolve)?;
    let op = r.scheme.build_on(a.n, r.c)?;
    ensure_stable(&op)?;
    let mut spec = IntegratorSpec::new(r.method).with_safety(r.safety);
    if let Some(dt) = a.dt {
        spec = spec.with_dt(dt);
    }
    let outcome = if r.problem.is_real() {
        run_typed::<f64>(&r, &op, &spec, false)?
    } else {
        run_typed::<Complex64>(&r, &op, &spec, true)?
    };
    let path = a.output.clone().unwrap_or_else(|| {
        out_dir.join(format!("run_{}_c{}_n{}.csv", r.scheme, c_label(r.c), a.n))
    });
    let body = run_header(&r, a.n, outcome.dt, outcome.steps) + &outcome.csv;
    write_file(&path, &body)?;
    println!(
        "scheme={} c={} n={} points={} steps={} dt={:.6e} error={:.16e}",
        r.scheme,
        r.c,
        a.n,
        op.grid().len(),
        outcome.steps,
        outcome.dt,
        outcome.error
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn ladder_from(ladder: &Option<Vec<usize>>, full: bool) -> Vec<usize> {
    match ladder {
        Some(l) => l.clone(),
        None if full => FULL_LADDER.to_vec(),
        None => DEFAULT_LADDER.to_vec(),
    }
}

fn report_line(r: &ConvergenceReport) -> String {
    let errors: Vec<String> = r.rows.iter().map(|row| format!("{:.3e}", row.error)).collect();
    format!(
        "scheme={} c={} problem={} integrator={} filter={} order={:.4} residual={:.2e} errors=[{}]",
        r.scheme,
        r.c,
        r.problem,
        r.integrator,
        r.filter_label(),
        r.fitted_order(),
        r.fit_residual(),
        errors.join(", ")
    )
}

fn curve_name(prefix: &str, r: &ConvergenceReport) -> String {
    let mut name = format!("{prefix}_{}_c{}", r.scheme, c_label(r.c));
    if let Some(f) = r.filter {
        name.push('_');
        name.push_str(f.label());
    }
    name + ".csv"
}

pub fn cmd_converge(a: &ConvergeArgs, out_dir: &Path) -> Result<()> {
    let r = resolve(&a.scheme, &a.evolve)?;
    let ladder = ladder_from(&a.ladder, a.full);
    let spec = ConvergenceSpec::new(r.scheme, r.c, r.problem, r.method, r.t_final)
        .with_ladder(&ladder)
        .with_safety(r.safety);
    let report = run_convergence_filters(&spec, &[r.filter])?.remove(0);
    let path = out_dir.join(curve_name("converge", &report));
    write_file(&path, &report.to_csv())?;
    println!("{}", report_line(&report));
    if a.bound {
        let te = problem_truncation(r.scheme, r.c, r.problem, r.t_final, &ladder)?;
        let check = error_bound_check(&report, &te)?;
        for row in &check.rows {
            println!(
                "N={} error={:.3e} max_truncation={:.3e} bound={:.3e}",
                row.n_res, row.error, row.max_truncation, row.bound
            );
        }
        println!(
            "bound_holds={} error_order={:.3} truncation_order={:.3} gap={:.3}",
            check.holds, check.error_order, check.truncation_order, check.gap
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

pub fn cmd_figure(a: &FigureArgs, out_dir: &Path) -> Result<()> {
    let id: FigureId = a.id.parse()?;
    let opts = FigureOptions {
        ladder: ladder_from(&a.ladder, a.full),
        t_final: a.t_final,
        safety: a.safety,
        method: None,
    };
    let reports = reproduce_figure(id, &opts)?;
    for r in &reports {
        println!("{}", report_line(r));
    }
    let paths = write_figure(out_dir, id, &reports)?;
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

pub fn cmd_symbol(a: &SymbolArgs, out_dir: &Path) -> Result<()> {
    let scheme: SchemeId = a.scheme.scheme.parse()?;
    let op = scheme.build_on(a.n, a.scheme.c)?;
    let (report, symbols) = stability_scan(&op);
    let path = out_dir.join(format!("symbol_{}_c{}_n{}.csv", scheme, c_label(a.scheme.c), a.n));
    write_file(&path, &symbol_scan_csv(&symbols))?;
    println!("{}", report.summary());
    println!("wrote {}", path.display());
    Ok(())
}

pub fn cmd_filter_study(a: &FilterStudyArgs, out_dir: &Path) -> Result<()> {
    let scheme: SchemeId = a.scheme.parse()?;
    let method = match &a.integrator {
        Some(m) => m.parse()?,
        None => default_method(scheme),
    };
    let mut filters = vec![None];
    for f in &a.filters {
        if let Some(f) = parse_filter(f)? {
            filters.push(Some(f));
        }
    }
    let ladder = ladder_from(&a.ladder, a.full);
    let spec = ConvergenceSpec::new(scheme, a.c, a.problem.parse()?, method, a.t_final)
        .with_ladder(&ladder)
        .with_safety(a.safety);
    let reports = run_convergence_filters(&spec, &filters)?;
    for r in &reports {
        println!("{}", report_line(r));
        let path = out_dir.join(curve_name("filter", r));
        write_file(&path, &r.to_csv())?;
        println!("wrote {}", path.display());
    }
    let upper = ladder[ladder.len() / 2];
    for r in reports.iter().filter(|r| r.filter.is_some()) {
        println!("filter={} order_for_N>={upper}: {:.4}", r.filter_label(), r.order_above(upper));
    }
    let path = out_dir.join(format!("filter_{}_c{}_summary.csv", scheme, c_label(a.c)));
    write_file(&path, &summary_csv(FigureId::Fig3, &reports).replacen("figure,", "study,", 1))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Table of points outside the block and operations per point.
pub fn cost_table() -> String {
    let rows: [(&str, SchemeId, f64); 7] = [
        ("standard 2nd order", SchemeId::Std2, 0.0),
        ("standard 4th order", SchemeId::Std4, 0.0),
        ("standard 6th order", SchemeId::Std6, 0.0),
        ("2-point block 3rd order", SchemeId::Block2, -0.25),
        ("3-point block 3rd order", SchemeId::Block3Low, 1.34),
        ("3-point block 5th order", SchemeId::Block3High, -0.385),
        ("3-point block 4th order compact", SchemeId::Block3High, 1.0),
    ];
    let mut out = format!(
        "{:<33} {:>8} {:>8} {:>8} {:>8}\n",
        "scheme", "c", "points", "adds", "mults"
    );
    for (label, scheme, c) in rows {
        let cost = scheme
            .build_on(16, c)
            .expect("fixed table entries are valid")
            .stencil_cost();
        writeln!(
            out,
            "{label:<33} {c:>8} {:>8} {:>8} {:>8}",
            cost.points_per_side(),
            cost.adds.to_string(),
            cost.mults.to_string()
        )
        .unwrap();
    }
    out
}
