//! Frame operator, bounds and classification of a few small fusion frames.

use fusion_dual::{FusionFrame, Subspace, Tolerance};

fn main() -> fusion_dual::Result<()> {
    let tol = Tolerance::default();
    let frames = [
        (
            "three members in R^4",
            FusionFrame::uniform(
                4,
                vec![
                    Subspace::coordinate(4, &[0, 1]),
                    Subspace::coordinate(4, &[1, 2]),
                    Subspace::coordinate(4, &[3]),
                ],
            )?,
        ),
        (
            "orthonormal pieces of R^3",
            FusionFrame::uniform(
                3,
                vec![
                    Subspace::span_of(3, &[&[1.0, 0.0, 1.0]], &tol)?,
                    Subspace::span_of(3, &[&[-1.0, 0.0, 1.0], &[0.0, 1.0, 0.0]], &tol)?,
                ],
            )?,
        ),
        (
            "two lines in R^3",
            FusionFrame::uniform(3, vec![Subspace::coordinate(3, &[0]), Subspace::coordinate(3, &[1])])?,
        ),
    ];
    for (name, w) in &frames {
        let c = w.classify(&tol);
        println!("{name}: {}", c.label());
        println!("  bounds ({:.6}, {:.6})", c.lower_bound, c.upper_bound);
        if c.is_frame {
            let s_inv = w.frame_operator_inverse(&tol)?;
            for row in s_inv.to_rows() {
                let row: Vec<String> = row.iter().map(|x| format!("{x:7.4}")).collect();
                println!("  [{}]", row.join(" "));
            }
        }
    }
    Ok(())
}
