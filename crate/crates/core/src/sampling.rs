//! Random subspaces, orthogonal matrices and duals for probes and tests.

use rand::Rng;

use crate::error::Result;
use crate::fusion::FusionFrame;
use crate::linalg::{Matrix, Subspace, Tolerance, Vector};

fn gaussian_like(rng: &mut impl Rng) -> f64 {
    // Sum of uniforms; heavy tails are not needed here.
    (0..4).map(|_| rng.gen_range(-1.0..1.0)).sum::<f64>() * 0.5
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vector {
    loop {
        let v = Vector::from_vec_unchecked((0..n).map(|_| gaussian_like(rng)).collect());
        if v.norm() > 1e-3 {
            return v;
        }
    }
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| gaussian_like(rng))
}

/// Orthogonal matrix from Gram–Schmidt on a random square matrix.
pub fn random_orthogonal(rng: &mut impl Rng, n: usize, tol: &Tolerance) -> Matrix {
    loop {
        let vs: Vec<Vector> = (0..n).map(|_| random_vector(rng, n)).collect();
        if let Ok(s) = Subspace::span(n, &vs, tol) {
            if s.dim() == n {
                return s.basis().clone();
            }
        }
    }
}

/// Random invertible matrix with singular values in roughly `[0.5, 2]`.
pub fn random_invertible(rng: &mut impl Rng, n: usize, tol: &Tolerance) -> Matrix {
    let q1 = random_orthogonal(rng, n, tol);
    let q2 = random_orthogonal(rng, n, tol);
    let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    &(&q1 * &Matrix::diag(&d)) * &q2.transpose()
}

pub fn random_subspace(rng: &mut impl Rng, n: usize, k: usize, tol: &Tolerance) -> Subspace {
    if k == 0 {
        return Subspace::zero(n);
    }
    loop {
        let vs: Vec<Vector> = (0..k).map(|_| random_vector(rng, n)).collect();
        if let Ok(s) = Subspace::span(n, &vs, tol) {
            if s.dim() == k {
                return s;
            }
        }
    }
}

/// `s` plus up to `extra` random directions.
pub fn random_superspace(rng: &mut impl Rng, s: &Subspace, extra: usize, tol: &Tolerance) -> Result<Subspace> {
    let n = s.ambient_dim();
    let mut vs = s.basis_vectors();
    vs.extend((0..extra).map(|_| random_vector(rng, n)));
    Subspace::span(n, &vs, tol)
}

/// A dual with `Vᵢ ⊇ S_W⁻¹ Wᵢ` and `νᵢ = ωᵢ`, always a valid dual.
pub fn random_superspace_dual(rng: &mut impl Rng, w: &FusionFrame, tol: &Tolerance) -> Result<FusionFrame> {
    let canon = w.canonical_dual(tol)?;
    let n = w.ambient_dim();
    let subspaces = canon
        .members()
        .iter()
        .map(|m| {
            let room = n - m.subspace.dim();
            let extra = if room == 0 { 0 } else { rng.gen_range(0..=room) };
            random_superspace(rng, &m.subspace, extra, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    FusionFrame::weighted(n, subspaces, Some(w.weights()))
}

/// Random weighted fusion frame with `m` members of the given dimensions.
pub fn random_fusion_frame(
    rng: &mut impl Rng,
    n: usize,
    dims: &[usize],
    weighted: bool,
    tol: &Tolerance,
) -> Result<FusionFrame> {
    loop {
        let subspaces: Vec<Subspace> = dims.iter().map(|&k| random_subspace(rng, n, k, tol)).collect();
        let weights: Vec<f64> = dims
            .iter()
            .map(|_| if weighted { rng.gen_range(0.5..2.0) } else { 1.0 })
            .collect();
        let w = FusionFrame::weighted(n, subspaces, Some(weights))?;
        if w.frame_bounds().0 > 1e-3 {
            return Ok(w);
        }
    }
}

/// Riesz fusion basis: coordinate blocks of sizes `dims` pushed through a
/// random invertible map.
pub fn random_riesz_basis(rng: &mut impl Rng, dims: &[usize], weighted: bool, tol: &Tolerance) -> Result<FusionFrame> {
    let n: usize = dims.iter().sum();
    let u = random_invertible(rng, n, tol);
    let mut start = 0;
    let mut subspaces = Vec::new();
    for &k in dims {
        let axes: Vec<usize> = (start..start + k).collect();
        subspaces.push(Subspace::coordinate(n, &axes).image(&u, tol)?);
        start += k;
    }
    let weights: Vec<f64> = dims
        .iter()
        .map(|_| if weighted { rng.gen_range(0.5..2.0) } else { 1.0 })
        .collect();
    FusionFrame::weighted(n, subspaces, Some(weights))
}
