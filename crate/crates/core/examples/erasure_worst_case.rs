//! Worst-case erasure errors of the canonical dual, per subset size and norm.
//! Member indices count from 0.

use fusion_dual::erasures::worst_case_error_table;
use fusion_dual::{DualPair, FusionFrame, NormKind, Subspace, Tolerance};

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
    let pair = DualPair::canonical(w, &tol)?;
    for norm in [NormKind::Frobenius, NormKind::Operator] {
        for r in 1..=2 {
            let rep = worst_case_error_table(&pair, r, norm, &tol)?;
            println!(
                "{norm:?} r={r}: worst {:.6} at {:?}",
                rep.worst_value, rep.argmax_subsets
            );
            for sv in rep.per_subset_values.unwrap_or_default() {
                println!("    {:?} -> {:.6}", sv.subset, sv.value);
            }
        }
    }
    Ok(())
}
