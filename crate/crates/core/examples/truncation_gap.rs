//! Truncation order against solution order: the block schemes converge faster
//! than their local residual suggests, and the error stays far below the
//! classical bound `t · max ‖T_e‖`.

use blockfd::analysis::truncation::{default_w, default_w_xx, truncation_order_rows};
use blockfd::experiments::{error_bound_check, problem_truncation, run_convergence, ConvergenceSpec};
use blockfd::{Method, Problem, SchemeId};

fn main() -> blockfd::Result<()> {
    let ladder = [32, 64, 128, 256];
    let cases = [
        (SchemeId::Std2, 0.0, Method::Rk4),
        (SchemeId::Block2, -0.25, Method::Rk4),
        (SchemeId::Block3High, -0.385, Method::Rk6),
        (SchemeId::Perturbed, 1.0, Method::ForwardEuler),
    ];
    for (scheme, c, method) in cases {
        let spec = ConvergenceSpec::new(scheme, c, Problem::ExpCos, method, 1.0).with_ladder(&ladder);
        let report = run_convergence(&spec)?;
        let te = problem_truncation(scheme, c, Problem::ExpCos, 1.0, &ladder)?;
        let check = error_bound_check(&report, &te)?;
        println!(
            "{:<12} c = {c:>7}: truncation order {:.2}, error order {:.2}, bound holds: {}",
            scheme.name(),
            check.truncation_order,
            check.error_order,
            check.holds
        );
        for row in &check.rows {
            println!("    N = {:>3}: error {:.3e}, bound {:.3e}", row.n_res, row.error, row.bound);
        }
    }

    for row in 0..3 {
        let est = truncation_order_rows(
            SchemeId::Block3High,
            -0.385,
            default_w,
            default_w_xx,
            &ladder,
            Some(row),
        )?;
        println!("block3-high row {row}: truncation order {:.2}", est.observed_order);
    }
    Ok(())
}
