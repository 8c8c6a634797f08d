//! Turns a fusion frame into a vector frame and beats the canonical dual on
//! a known pair of erasures by halving the erased dual vectors.

use fusion_dual::discrete::{bridge_fusion_to_discrete, halving_dual, standard_basis};
use fusion_dual::erasures::{discrete_worst_case, partial_erasure_error, ErasureMask};
use fusion_dual::{BridgeMode, FusionFrame, NormKind, Subspace, Tolerance};

fn main() -> fusion_dual::Result<()> {
    let tol = Tolerance::default();
    let w = FusionFrame::uniform(
        3,
        vec![
            Subspace::span_of(3, &[&[1., 0., 0.], &[0., 1., 0.]], &tol)?,
            Subspace::span_of(3, &[&[0., 1., 0.]], &tol)?,
            Subspace::span_of(3, &[&[0., 0., 1.], &[1., -1., 0.]], &tol)?,
        ],
    )?;
    let raw = bridge_fusion_to_discrete(&w, &standard_basis(3), BridgeMode::CanonicalWeighted, &tol)?;
    let (f, kept) = raw.compact_nonzero(&tol);
    println!("kept {} of {} vectors", kept.len(), raw.len());
    for v in f.vectors() {
        let sevenths: Vec<f64> = v.as_slice().iter().map(|x| (x * 7.0 * 1e9).round() / 1e9).collect();
        println!("  7 f = {sevenths:?}");
    }
    let canon = f.canonical_dual(&tol)?;
    let d1 = discrete_worst_case(&f, &canon, 1, NormKind::Frobenius, &tol)?;
    println!("canonical d1 = {:.6} at {:?}", d1.worst_value, d1.argmax_subsets);

    for pair in [[0, 1], [2, 5], [0, 6]] {
        let mask = ErasureMask::new(f.len(), pair)?;
        let before = partial_erasure_error(&f, &canon, &mask, NormKind::Frobenius, &tol)?;
        match halving_dual(&f, &pair, &tol) {
            Ok(g) => {
                let after = partial_erasure_error(&f, &g, &mask, NormKind::Frobenius, &tol)?;
                println!("erase {pair:?}: canonical {before:.6}, halved {after:.6}");
            }
            Err(e) => println!("erase {pair:?}: canonical {before:.6}, halving unavailable ({e})"),
        }
    }
    Ok(())
}
