//! Sufficient-condition certificates for optimal duals, followed by a random
//! search for a dual that does better.

use fusion_dual::optimality::{certify_canonical_optimal, certify_tight_uniform, probe_refutation};
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
    let cert = certify_canonical_optimal(&w, &tol)?;
    println!(
        "canonical: {:?}, c = {:.6}, maximal set {:?}",
        cert.verdict, cert.c_value, cert.lambda1
    );
    for note in &cert.notes {
        println!("  {note}");
    }
    let probe = probe_refutation(&DualPair::canonical(w.clone(), &tol)?, 200, 7, &tol)?;
    println!(
        "probe: {:?} after {} duals (baseline {:.6}, best {:.6})",
        probe.verdict, probe.probes_evaluated, probe.baseline, probe.best_value
    );

    let v = w.canonical_dual(&tol)?;
    let tight = certify_tight_uniform(&w, &v, &tol);
    println!("tight route: {:?}", tight.verdict);

    // Four lines in the plane, equally spaced: tight with equal dimensions.
    let lines: Vec<Subspace> = (0..4)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / 4.0;
            Subspace::span_of(2, &[&[t.cos(), t.sin()]], &tol)
        })
        .collect::<Result<_, _>>()?;
    let w = FusionFrame::uniform(2, lines)?;
    let v = w.canonical_dual(&tol)?;
    let tight = certify_tight_uniform(&w, &v, &tol);
    println!("four lines: {:?}, d1 bound {:?}", tight.verdict, tight.d1_bound);

    // A poorly weighted dual of the same lines loses to the canonical one.
    let skew = w.canonical_dual(&tol)?.with_weights(vec![1.5, 0.5, 1.5, 0.5])?;
    let pair = DualPair::new(w.clone(), skew, &tol)?;
    if pair.is_dual(&tol) {
        let probe = probe_refutation(&pair, 200, 7, &tol)?;
        println!(
            "skewed dual probe: {:?} (baseline {:.6}, best {:.6})",
            probe.verdict, probe.baseline, probe.best_value
        );
    }
    Ok(())
}
