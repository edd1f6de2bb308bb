//! Post-processing the two-point block solution at `c = -1/4` with a spectral
//! cutoff and with a local B-spline kernel.

use blockfd::experiments::{reproduce_figure, FigureId, FigureOptions};
use blockfd::postprocess::{local_kernel, FilterSpec};

fn main() -> blockfd::Result<()> {
    println!("local kernel taps: {:?}", local_kernel(&FilterSpec::local())?);
    let opts = FigureOptions::full();
    for r in reproduce_figure(FigureId::Fig3, &opts)? {
        println!(
            "filter = {:<12} order {:.3}, order for N >= 256: {:.3}",
            r.filter_label(),
            r.fitted_order(),
            r.order_above(256)
        );
    }
    Ok(())
}
