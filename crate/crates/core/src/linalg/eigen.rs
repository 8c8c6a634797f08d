//! Symmetric eigendecomposition by cyclic Jacobi rotations and the spectral
//! functions built on it.

use super::{Matrix, Tolerance};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a symmetric matrix, eigenvalues ascending; eigenvectors are
/// the columns of `vectors` in the same order.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymmetricEigen {
    /// `V f(Λ) Vᵀ`
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        Matrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * fv[k] * self.vectors[(j, k)])
                .sum()
        })
    }

    pub fn smallest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn largest(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

pub fn symmetric_eigen(a: &Matrix) -> SymmetricEigen {
    assert!(a.is_square(), "eigendecomposition needs a square matrix");
    let n = a.rows();
    let mut m = a.symmetrize();
    let mut v = Matrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].total_cmp(&m[(y, y)]));
    SymmetricEigen {
        values: order.iter().map(|&k| m[(k, k)]).collect(),
        vectors: v.select_columns(&order),
    }
}

fn check_spd(a: &Matrix, tol: &Tolerance) -> Result<SymmetricEigen> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let eig = symmetric_eigen(a);
    if eig.smallest() <= tol.rank_eps {
        return Err(Error::NotPositiveDefinite {
            smallest: eig.smallest(),
        });
    }
    Ok(eig)
}

/// One Newton–Schulz step `X(2I − AX)`, symmetrized.
fn refine_inverse(a: &Matrix, x: &Matrix) -> Matrix {
    let n = a.rows();
    let ax = a * x;
    let corr = &Matrix::identity(n).scale(2.0) - &ax;
    (x * &corr).symmetrize()
}

/// Inverse of a symmetric positive definite matrix.
pub fn spd_inverse(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let eig = check_spd(a, tol)?;
    let x = eig.map(|l| 1.0 / l);
    Ok(refine_inverse(a, &x))
}

/// Symmetric inverse square root of an SPD matrix.
pub fn spd_inv_sqrt(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let eig = check_spd(a, tol)?;
    Ok(eig.map(|l| 1.0 / l.sqrt()).symmetrize())
}

/// Moore–Penrose pseudo-inverse of a symmetric positive semidefinite matrix;
/// eigenvalues at or below `rank_eps × λ_max` are treated as zero.
pub fn psd_pseudo_inverse(a: &Matrix, tol: &Tolerance) -> Matrix {
    let eig = symmetric_eigen(a);
    let cut = tol.rank_eps * eig.largest().abs().max(f64::MIN_POSITIVE);
    eig.map(|l| if l > cut { 1.0 / l } else { 0.0 })
}

/// Minimum-norm least-squares solution of `a x = b` (`b` may have several
/// columns). Returns the solution and the Frobenius residual `‖a x − b‖`.
pub fn min_norm_solve(a: &Matrix, b: &Matrix, tol: &Tolerance) -> (Matrix, f64) {
    assert_eq!(a.rows(), b.rows());
    let gram = a * &a.transpose();
    let y = &psd_pseudo_inverse(&gram, tol) * b;
    let x = &a.transpose() * &y;
    let residual = (&(a * &x) - b).frobenius_norm();
    (x, residual)
}

/// Largest singular value: square root of the top eigenvalue of `aᵀa`.
/// Values at or below `rank_eps²` relative to `‖a‖_F²` are reported as 0.
pub fn operator_norm(a: &Matrix, tol: &Tolerance) -> f64 {
    let b = &a.transpose() * a;
    if b.rows() == 0 || b.max_abs() == 0.0 {
        return 0.0;
    }
    let top = symmetric_eigen(&b).largest();
    if top <= tol.rank_eps * tol.rank_eps * b.trace() {
        return 0.0;
    }
    top.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;
    use rand::{Rng, SeedableRng};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn random_spd(rng: &mut impl Rng, n: usize) -> Matrix {
        let g = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        &(&g.transpose() * &g) + &Matrix::identity(n).scale(0.1)
    }

    #[test]
    fn jacobi_reconstructs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let a = random_spd(&mut rng, 6);
        let eig = symmetric_eigen(&a);
        assert!(eig.map(|l| l).max_abs_diff(&a) < 1e-12);
        let vtv = &eig.vectors.transpose() * &eig.vectors;
        assert!(vtv.max_abs_diff(&Matrix::identity(6)) < 1e-13);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn inverse_of_identity_and_diagonal() {
        let i = Matrix::identity(3);
        assert!(spd_inverse(&i, &tol()).unwrap().max_abs_diff(&i) < 1e-15);
        let d = Matrix::diag(&[1.0, 2.0, 1.0, 1.0]);
        let inv = spd_inverse(&d, &tol()).unwrap();
        assert!(inv.max_abs_diff(&Matrix::diag(&[1.0, 0.5, 1.0, 1.0])) < 1e-15);
    }

    #[test]
    fn inverse_of_overlapping_frame_operator() {
        let s = Matrix::from_rows(&[vec![1.5, -0.5, 0.0], vec![-0.5, 2.5, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let expect = Matrix::from_rows(&[
            vec![5.0 / 7.0, 1.0 / 7.0, 0.0],
            vec![1.0 / 7.0, 3.0 / 7.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert!(spd_inverse(&s, &tol()).unwrap().max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn singular_is_rejected() {
        let a = Matrix::diag(&[1.0, 0.0]);
        assert!(matches!(
            spd_inverse(&a, &tol()),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(spd_inv_sqrt(&a, &tol()).is_err());
    }

    #[test]
    fn inv_sqrt_diagonal_and_random() {
        let r = spd_inv_sqrt(&Matrix::diag(&[4.0, 1.0]), &tol()).unwrap();
        assert!(r.max_abs_diff(&Matrix::diag(&[0.5, 1.0])) < 1e-15);

        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let a = random_spd(&mut rng, 5);
        let r = spd_inv_sqrt(&a, &tol()).unwrap();
        let check = &(&r * &r) * &a;
        assert!(check.max_abs_diff(&Matrix::identity(5)) < 1e-9);
    }

    #[test]
    fn operator_norm_basic() {
        assert!((operator_norm(&Matrix::identity(5), &tol()) - 1.0).abs() < 1e-12);
        let g = Vector::new(vec![1.0, 2.0, -2.0]).unwrap();
        let f = Vector::new(vec![0.0, 3.0, 4.0]).unwrap();
        let r1 = Matrix::outer(&g, &f);
        assert!((operator_norm(&r1, &tol()) - 15.0).abs() < 1e-12);
        assert_eq!(operator_norm(&Matrix::zeros(3, 3), &tol()), 0.0);
    }

    #[test]
    fn operator_norm_matches_eigen_oracle() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let a = Matrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
            let oracle = symmetric_eigen(&(&a.transpose() * &a)).largest().sqrt();
            assert!((operator_norm(&a, &tol()) - oracle).abs() < 1e-8);
        }
    }

    #[test]
    fn min_norm_solution_is_minimal() {
        // x + y = 2 has minimum-norm solution (1, 1).
        let a = Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![2.0]]).unwrap();
        let (x, res) = min_norm_solve(&a, &b, &tol());
        assert!(res < 1e-14);
        assert!((x[(0, 0)] - 1.0).abs() < 1e-14 && (x[(1, 0)] - 1.0).abs() < 1e-14);
    }
}
