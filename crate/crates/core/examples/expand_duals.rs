//! Grows and trims the members of an optimal dual without changing any
//! reconstruction piece, so every variant keeps the same erasure profile.

use fusion_dual::optimality::{expand_optimal_family, ExpansionKind};
use fusion_dual::{DualPair, FusionFrame, Subspace, Tolerance};

fn main() -> fusion_dual::Result<()> {
    let tol = Tolerance::default();
    let w = FusionFrame::uniform(
        4,
        vec![
            Subspace::coordinate(4, &[0, 1]),
            Subspace::coordinate(4, &[1, 2]),
            Subspace::coordinate(4, &[3]),
        ],
    )?;
    let pair = DualPair::canonical(w.clone(), &tol)?;
    for i in 0..pair.len() {
        for variant in expand_optimal_family(&pair, i, &tol)? {
            match &variant.kind {
                ExpansionKind::Extended { direction } => {
                    println!("member {i}: extend by {direction:?}, dims {:?}", variant.dual.dims())
                }
                other => println!("member {i}: {other:?}, dims {:?}", variant.dual.dims()),
            }
        }
    }

    // With e_1 added to the third member, fewer directions remain to add.
    let v = w.canonical_dual(&tol)?.with_member(2, Subspace::coordinate(4, &[0, 3]));
    let pair = DualPair::new(w, v, &tol)?;
    for variant in expand_optimal_family(&pair, 2, &tol)? {
        println!("enlarged member: {:?}, dims {:?}", variant.kind, variant.dual.dims());
    }
    Ok(())
}
