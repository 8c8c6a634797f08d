//! Checks candidate duals, including a family that is component preserving
//! without being a dual, and lifts a dual to a component-preserving one.

use fusion_dual::duality::component_preserving_check;
use fusion_dual::duality::lift_to_component_preserving;
use fusion_dual::{verify_dual, DualPair, FusionFrame, LeftInverseMap, Matrix, Subspace, Tolerance};

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

    let xi = [0.3, -1.0, 2.0, 0.5, 1.5, -0.7, 0.25];
    let v = FusionFrame::uniform(
        4,
        vec![
            Subspace::span_of(
                4,
                &[&[1., 0., 0., 0.], &[0., 1., 0., 0.], &[0., 0., xi[0], xi[1]]],
                &tol,
            )?,
            Subspace::span_of(
                4,
                &[&[0., 1., 0., 0.], &[0., 0., 1., 0.], &[xi[2], 0., 0., xi[3]]],
                &tol,
            )?,
            Subspace::span_of(4, &[&[0., 0., 0., 1.], &[xi[4], xi[5], xi[6], 0.]], &tol)?,
        ],
    )?;
    let pair = DualPair::new(w.clone(), v, &tol)?;
    let check = verify_dual(&pair, &tol);
    println!(
        "enlarged family is a dual: {} (residual {:.2e})",
        check.passes, check.residual
    );
    let lifted = lift_to_component_preserving(&pair, &tol)?;
    println!("component-preserving lift dims: {:?}", lifted.dims());

    // Two hyperplanes in R^3 with a left inverse that preserves components.
    let w = FusionFrame::uniform(
        3,
        vec![
            Subspace::span_of(3, &[&[0., 1., 0.], &[0., 0., 1.]], &tol)?,
            Subspace::span_of(3, &[&[1., 0., 0.], &[0., 0., 1.]], &tol)?,
        ],
    )?;
    let v = FusionFrame::uniform(
        3,
        vec![
            Subspace::span_of(3, &[&[0., 1., 0.], &[1., 2., -0.5]], &tol)?,
            Subspace::span_of(3, &[&[1., 0., 0.], &[-1., -2., 1.5]], &tol)?,
        ],
    )?;
    let blocks = vec![
        Matrix::from_rows(&[vec![0., 0., 1.], vec![0., 1., 2.], vec![0., 0., -0.5]])?,
        Matrix::from_rows(&[vec![1., 0., -1.], vec![0., 0., -2.], vec![0., 0., 1.5]])?,
    ];
    let a = LeftInverseMap::new(&w, blocks, &tol)?;
    println!(
        "component preserving: {}",
        component_preserving_check(&w, &v, &a, &tol)?
    );
    let pair = DualPair::new(w, v, &tol)?;
    let check = verify_dual(&pair, &tol);
    println!("dual: {} (residual {:.4})", check.passes, check.residual);
    for row in check.reconstruction.to_rows() {
        let row: Vec<String> = row
            .iter()
            .map(|x| format!("{:8.4}", if x.abs() < 1e-12 { 0.0 } else { *x }))
            .collect();
        println!("  [{}]", row.join(" "));
    }
    Ok(())
}
