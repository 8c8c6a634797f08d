//! An overcomplete Parseval frame built from an orthonormal fusion basis,
//! with several duals sharing the same single-erasure operator norm.

use fusion_dual::discrete::standard_basis;
use fusion_dual::optimality::parseval_optimal_family;
use fusion_dual::{FusionFrame, Subspace, Tolerance};

fn main() -> fusion_dual::Result<()> {
    let tol = Tolerance::default();
    let w1 = Subspace::span_of(3, &[&[1., 0., 1.]], &tol)?;
    let w2 = Subspace::span_of(3, &[&[-1., 0., 1.], &[0., 1., 0.]], &tol)?;
    let w = FusionFrame::uniform(3, vec![w1.clone(), w2.clone()])?;
    let families = vec![
        vec![w1.clone(), w2.clone()],
        vec![
            Subspace::span_of(3, &[&[1., 0., 1.], &[1., 0., -1.]], &tol)?,
            w2.clone(),
        ],
        vec![Subspace::full(3), w2],
    ];
    let basis = standard_basis(3);
    let fam = parseval_optimal_family(&w, &families, Some(&basis), &tol)?;
    println!("frame ({} vectors):", fam.frame.len());
    for f in fam.frame.vectors() {
        println!("  {:?}", rounded(f.as_slice()));
    }
    for (k, (g, d1)) in fam.duals.iter().zip(&fam.d1).enumerate() {
        println!("dual {k}: d1 = {d1:.6}");
        for v in g.vectors() {
            println!("  {:?}", rounded(v.as_slice()));
        }
    }

    let fam = parseval_optimal_family(&w, &families[..1], None, &tol)?;
    println!("default basis:");
    for e in &fam.basis {
        println!("  {:?}", rounded(e.as_slice()));
    }
    Ok(())
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e6).round() / 1e6 + 0.0).collect()
}
