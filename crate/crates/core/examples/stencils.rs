//! Prints the stencil rows of every scheme, and the compact variant of the
//! fifth-order three-point scheme.

use blockfd::SchemeId;

fn main() -> blockfd::Result<()> {
    let cases = [
        (SchemeId::Perturbed, 1.0),
        (SchemeId::Block2, -0.25),
        (SchemeId::Block3Low, 1.34),
        (SchemeId::Block3High, -0.385),
        (SchemeId::Block3High, 1.0),
        (SchemeId::Std2, 0.0),
        (SchemeId::Std4, 0.0),
        (SchemeId::Std6, 0.0),
    ];
    for (scheme, c) in cases {
        let op = scheme.build_on(16, c)?;
        print!("{}", op.stencil_table());
    }

    let compact = SchemeId::Block3High.build_on(16, 1.0)?;
    println!(
        "block3-high at c = 1: coefficient of u_(j-2/3) = {}, of u_(j+4/3) = {}",
        compact.coefficient(0, -2),
        compact.coefficient(2, 2)
    );
    Ok(())
}
