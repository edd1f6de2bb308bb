//! Scans the Fourier symbol of the two-point block scheme across `c` and shows
//! where it stops being stable.

use blockfd::analysis::stability_scan;
use blockfd::SchemeId;

fn main() -> blockfd::Result<()> {
    println!("{:>7} {:>14} {:>10} {:>8}", "c", "max Re(λ)", "max cond", "stable");
    for k in -8..=8 {
        let c = k as f64 * 0.075;
        let op = SchemeId::Block2.build_on(64, c)?;
        let (r, _) = stability_scan(&op);
        println!(
            "{c:>7.3} {:>14.6e} {:>10.3} {:>8}",
            r.max_real_part, r.max_condition, r.stable
        );
    }

    for (scheme, c) in [(SchemeId::Block3Low, 1.34), (SchemeId::Block3High, -0.385)] {
        let (r, _) = stability_scan(&scheme.build_on(64, c)?);
        println!("{}", r.summary());
    }
    Ok(())
}
