//! Runs every convergence figure on the desk-scale ladder and prints the fitted orders.
//!
//! Pass `--full` for the 32..1024 ladder.

use std::time::Instant;

use blockfd::experiments::{reproduce_figure, FigureId, FigureOptions};

fn main() -> blockfd::Result<()> {
    let opts = if std::env::args().any(|a| a == "--full") {
        FigureOptions::full()
    } else {
        FigureOptions::default()
    };
    for id in FigureId::ALL {
        let start = Instant::now();
        let reports = reproduce_figure(id, &opts)?;
        for r in &reports {
            let errors: Vec<String> = r.rows.iter().map(|row| format!("{:.3e}", row.error)).collect();
            println!(
                "fig {id:>2}  {:<12} c = {:>8.4}  filter = {:<12} order = {:.3}  errors = [{}]",
                r.scheme.name(),
                r.c,
                r.filter_label(),
                r.fitted_order(),
                errors.join(", ")
            );
        }
        println!("fig {id:>2}  took {:.1} s", start.elapsed().as_secs_f64());
    }
    Ok(())
}
