//! Moves a dual pair by an orthogonal map and by invertible maps. Orthogonal
//! maps keep every erasure value; other invertible maps need `uᵀu` to leave
//! every member invariant.

use fusion_dual::optimality::{transport_by_invertible, transport_by_unitary};
use fusion_dual::sampling::{random_orthogonal, random_superspace_dual};
use fusion_dual::{worst_case_error, DualPair, FusionFrame, Matrix, NormKind, Subspace, Tolerance};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() -> fusion_dual::Result<()> {
    let tol = Tolerance::default();
    let mut rng = StdRng::seed_from_u64(11);
    let w = FusionFrame::uniform(
        4,
        vec![
            Subspace::coordinate(4, &[0, 1]),
            Subspace::coordinate(4, &[1, 2]),
            Subspace::coordinate(4, &[3]),
        ],
    )?;
    let v = random_superspace_dual(&mut rng, &w, &tol)?;
    let pair = DualPair::new(w, v, &tol)?;
    let u = random_orthogonal(&mut rng, 4, &tol);
    let moved = transport_by_unitary(&pair, &u, &tol)?;
    for r in 1..=2 {
        for norm in [NormKind::Frobenius, NormKind::Operator] {
            let a = worst_case_error(&pair, r, norm, &tol)?.worst_value;
            let b = worst_case_error(&moved, r, norm, &tol)?.worst_value;
            println!("r={r} {norm:?}: {a:.9} -> {b:.9}");
        }
    }

    let shear = Matrix::from_rows(&[
        vec![1., 0.5, 0., 0.],
        vec![0., 1., 0., 0.],
        vec![0., 0., 2., 0.],
        vec![0., 0., 0., 1.],
    ])?;
    match transport_by_unitary(&pair, &shear, &tol) {
        Ok(_) => println!("shear accepted as orthogonal"),
        Err(e) => println!("shear rejected: {e}"),
    }
    match transport_by_invertible(&pair, &shear, &tol) {
        Ok(p) => println!("sheared pair is a dual: {}", p.is_dual(&tol)),
        Err(e) => println!("shear: {e}"),
    }
    let canonical = DualPair::canonical(pair.primal().clone(), &tol)?;
    let stretch = Matrix::diag(&[1., 1., 1., 2.]);
    let moved = transport_by_invertible(&canonical, &stretch, &tol)?;
    println!("stretched canonical pair is a dual: {}", moved.is_dual(&tol));
    Ok(())
}
