//! Block grids, sampling and the discrete L2 norm.

use blockfd::{BlockGrid, GridFunction};

fn main() -> blockfd::Result<()> {
    for (n, m) in [(4, 1), (32, 2), (32, 3)] {
        let g = BlockGrid::new(n, m)?;
        println!(
            "N = {n:>2}, m = {m}: {} blocks, {} points, h = {:.6}, sub-spacing = {:.6}",
            g.n_blocks(),
            g.len(),
            g.h(),
            g.sub_spacing()
        );
    }

    let g = BlockGrid::new(4, 1)?;
    let cos = GridFunction::sample(g, f64::cos);
    println!("cos x on 4 points: {:?}", cos.values());

    for n in [16, 64, 256] {
        let g = BlockGrid::new(n, 2)?;
        let one = GridFunction::sample(g, |_| 1.0);
        let c = GridFunction::sample(g, f64::cos);
        println!(
            "N = {n:>3}: ||1|| = {:.15}, ||cos|| = {:.15}",
            one.l2_norm(),
            c.l2_norm()
        );
    }
    Ok(())
}
