use super::{symmetric_eigen, Matrix, Tolerance, Vector};
use crate::error::{Error, Result};

/// A linear subspace of ℝⁿ held by an orthonormal basis. `dim() == 0` is the
/// zero subspace.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    /// ambient_dim × k, orthonormal columns
    basis: Matrix,
}

/// Orthonormal basis of the span of `vectors` by pivoted, twice-applied
/// Gram–Schmidt. A candidate direction is dropped once its residual norm is
/// at most `rank_eps × (largest input norm)`.
pub fn orthonormal_basis(ambient_dim: usize, vectors: &[Vector], tol: &Tolerance) -> Result<Subspace> {
    if ambient_dim == 0 {
        return Err(Error::InvalidInput("ambient dimension must be positive".into()));
    }
    if let Some(bad) = vectors.iter().find(|v| v.dim() != ambient_dim) {
        return Err(Error::DimensionMismatch {
            expected: ambient_dim,
            found: bad.dim(),
        });
    }
    let scale = vectors.iter().map(Vector::norm).fold(0.0, f64::max);
    let cut = tol.rank_eps * scale;
    let mut work: Vec<Vec<f64>> = vectors.iter().map(|v| v.as_slice().to_vec()).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();

    while basis.len() < ambient_dim && !work.is_empty() {
        let (best, best_norm) = work
            .iter()
            .enumerate()
            .map(|(k, w)| (k, w.iter().map(|x| x * x).sum::<f64>().sqrt()))
            .fold((0, -1.0), |acc, (k, n)| if n > acc.1 { (k, n) } else { acc });
        if best_norm <= cut || best_norm == 0.0 {
            break;
        }
        let mut q = work.swap_remove(best);
        // second pass against the accepted basis
        for b in &basis {
            let c = super::matrix::dot(&q, b);
            q.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n <= cut || n == 0.0 {
            continue;
        }
        q.iter_mut().for_each(|x| *x /= n);
        for w in work.iter_mut() {
            let c = super::matrix::dot(w, &q);
            w.iter_mut().zip(&q).for_each(|(x, y)| *x -= c * y);
        }
        basis.push(q);
    }

    let cols: Vec<Vector> = basis.into_iter().map(Vector::from_vec_unchecked).collect();
    Ok(Subspace {
        ambient_dim,
        basis: Matrix::from_columns(ambient_dim, &cols),
    })
}

/// Gram–Schmidt in the given order, skipping vectors already in the span of
/// their predecessors (residual at most `rank_eps` relative to their norm).
pub fn orthonormal_sequence(ambient_dim: usize, vectors: &[Vector], tol: &Tolerance) -> Result<Vec<Vector>> {
    if let Some(bad) = vectors.iter().find(|v| v.dim() != ambient_dim) {
        return Err(Error::DimensionMismatch {
            expected: ambient_dim,
            found: bad.dim(),
        });
    }
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        if out.len() == ambient_dim {
            break;
        }
        let scale = v.norm();
        let mut q = v.as_slice().to_vec();
        for _ in 0..2 {
            for b in &out {
                let c = super::matrix::dot(&q, b);
                q.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > tol.rank_eps.max(1e-8) * scale && n > 0.0 {
            q.iter_mut().for_each(|x| *x /= n);
            out.push(q);
        }
    }
    Ok(out.into_iter().map(Vector::from_vec_unchecked).collect())
}

impl Subspace {
    /// Span of the given vectors.
    pub fn span(ambient_dim: usize, vectors: &[Vector], tol: &Tolerance) -> Result<Self> {
        orthonormal_basis(ambient_dim, vectors, tol)
    }

    /// Span of the given raw coordinate rows.
    pub fn span_of(ambient_dim: usize, vectors: &[&[f64]], tol: &Tolerance) -> Result<Self> {
        let vs = vectors
            .iter()
            .map(|v| Vector::new(v.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        orthonormal_basis(ambient_dim, &vs, tol)
    }

    /// Wraps a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: Matrix, tol: &Tolerance) -> Result<Self> {
        let k = basis.cols();
        if k > basis.rows() {
            return Err(Error::InvalidInput("more basis columns than ambient dimension".into()));
        }
        let dev = (&basis.transpose() * &basis).max_abs_diff(&Matrix::identity(k));
        if dev > tol.residual_eps {
            return Err(Error::NonOrthonormalBasis { deviation: dev });
        }
        Ok(Subspace {
            ambient_dim: basis.rows(),
            basis,
        })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
        }
    }

    /// Span of the listed standard basis vectors.
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Self {
        let cols: Vec<Vector> = axes.iter().map(|&k| Vector::unit(ambient_dim, k)).collect();
        Subspace {
            ambient_dim,
            basis: Matrix::from_columns(ambient_dim, &cols),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.columns()
    }

    /// `basis · basisᵀ`
    pub fn projector(&self) -> Matrix {
        &self.basis * &self.basis.transpose()
    }

    pub fn project(&self, v: &Vector) -> Vector {
        let coords = self.basis.transpose().apply(v);
        self.basis.apply(&coords)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// `inner ⊆ self`, tested as `‖(I − π_self) basis(inner)‖_F ≤ residual_eps`.
    pub fn contains(&self, inner: &Subspace, tol: &Tolerance) -> Result<bool> {
        self.check_ambient(inner)?;
        if inner.is_zero() {
            return Ok(true);
        }
        let resid = &inner.basis - &(&self.projector() * &inner.basis);
        Ok(resid.frobenius_norm() <= tol.residual_eps)
    }

    pub fn contains_vector(&self, v: &Vector, tol: &Tolerance) -> bool {
        (v - &self.project(v)).norm() <= tol.residual_eps * v.norm().max(1.0)
    }

    /// Mutual containment.
    pub fn same_as(&self, other: &Subspace, tol: &Tolerance) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.contains(other, tol)? && other.contains(self, tol)?)
    }

    /// `self ∩ other`, as the null space of `(I − π_a) + (I − π_b)`.
    pub fn intersection(&self, other: &Subspace, tol: &Tolerance) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.ambient_dim;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(n));
        }
        let id = Matrix::identity(n);
        let m = &(&id - &self.projector()) + &(&id - &other.projector());
        let eig = symmetric_eigen(&m);
        let keep: Vec<usize> = (0..n).filter(|&k| eig.values[k] <= tol.rank_eps).collect();
        let basis = eig.vectors.select_columns(&keep);
        Ok(Subspace { ambient_dim: n, basis })
    }

    /// Span of the union of all parts.
    pub fn sum(ambient_dim: usize, parts: &[&Subspace], tol: &Tolerance) -> Result<Subspace> {
        let mut vs = Vec::new();
        for p in parts {
            if p.ambient_dim != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: p.ambient_dim,
                });
            }
            vs.extend(p.basis_vectors());
        }
        orthonormal_basis(ambient_dim, &vs, tol)
    }

    /// Orthogonal complement, from the eigenvectors of `π_self` with eigenvalue near 0.
    pub fn orthogonal_complement(&self) -> Subspace {
        let n = self.ambient_dim;
        if self.is_zero() {
            return Subspace::full(n);
        }
        if self.dim() == n {
            return Subspace::zero(n);
        }
        let eig = symmetric_eigen(&self.projector());
        // eigenvalues ascending: the first n − k are the zero ones
        let keep: Vec<usize> = (0..n - self.dim()).collect();
        Subspace {
            ambient_dim: n,
            basis: eig.vectors.select_columns(&keep),
        }
    }

    /// `{u x : x ∈ self}`; dimension drops only if `u` is singular on `self`.
    pub fn image(&self, u: &Matrix, tol: &Tolerance) -> Result<Subspace> {
        if !u.is_square() || u.cols() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: u.cols(),
            });
        }
        let img = u * &self.basis;
        orthonormal_basis(self.ambient_dim, &img.columns(), tol)
    }

    /// Same subspace, re-based on the orthonormalized projections of the
    /// standard basis vectors taken in index order. Gives coordinate-aligned
    /// bases whenever the subspace is coordinate-aligned.
    pub fn canonical_basis(&self, tol: &Tolerance) -> Subspace {
        let n = self.ambient_dim;
        if self.is_zero() {
            return self.clone();
        }
        let p = self.projector();
        let mut picked: Vec<Vec<f64>> = Vec::new();
        for j in 0..n {
            let mut v = p.column(j).into_vec();
            for b in &picked {
                let c = super::matrix::dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            for b in &picked {
                let c = super::matrix::dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nv > tol.rank_eps.max(1e-8) {
                v.iter_mut().for_each(|x| *x /= nv);
                picked.push(v);
            }
            if picked.len() == self.dim() {
                break;
            }
        }
        let cols: Vec<Vector> = picked.into_iter().map(Vector::from_vec_unchecked).collect();
        Subspace {
            ambient_dim: n,
            basis: Matrix::from_columns(n, &cols),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn v(x: &[f64]) -> Vector {
        Vector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn spanning_set_of_r3() {
        let s = orthonormal_basis(
            3,
            &[v(&[1.0, 0.0, 1.0]), v(&[-1.0, 0.0, 1.0]), v(&[0.0, 1.0, 0.0])],
            &tol(),
        )
        .unwrap();
        assert_eq!(s.dim(), 3);
        assert!(s.projector().max_abs_diff(&Matrix::identity(3)) < 1e-14);
    }

    #[test]
    fn single_vector_is_normalized() {
        let s = orthonormal_basis(3, &[v(&[1.0, 0.0, 1.0])], &tol()).unwrap();
        let h = 0.5f64.sqrt();
        assert!(s.basis().column(0).max_abs_diff(&v(&[h, 0.0, h])) < 1e-15);
    }

    #[test]
    fn parallel_vectors_have_rank_one() {
        // Gram determinant oracle: |a|²|b|² − (a·b)² = 0 ⇒ rank 1.
        let a = v(&[1.0, 0.0, 1.0]);
        let b = v(&[2.0, 0.0, 2.0]);
        let gram_det = a.dot(&a) * b.dot(&b) - a.dot(&b).powi(2);
        assert_eq!(gram_det, 0.0);
        assert_eq!(orthonormal_basis(3, &[a, b], &tol()).unwrap().dim(), 1);
    }

    #[test]
    fn mismatched_dimensions_error() {
        let r = orthonormal_basis(3, &[v(&[1.0, 0.0, 1.0]), v(&[1.0, 0.0])], &tol());
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn projector_examples() {
        assert!(Subspace::full(4).projector().max_abs_diff(&Matrix::identity(4)) < 1e-15);
        assert_eq!(Subspace::zero(3).projector().max_abs(), 0.0);
        let w2 = Subspace::span_of(3, &[&[-1.0, 0.0, 1.0], &[0.0, 1.0, 0.0]], &tol()).unwrap();
        let col = w2.projector().column(0);
        assert!(col.max_abs_diff(&v(&[0.5, 0.0, -0.5])) < 1e-15);
        assert!((w2.projector().trace() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn containment() {
        let xi = [0.3, -1.7];
        let v1 = Subspace::span_of(
            4,
            &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, xi[0], xi[1]]],
            &tol(),
        )
        .unwrap();
        let w1 = Subspace::coordinate(4, &[0, 1]);
        assert!(v1.contains(&w1, &tol()).unwrap());
        assert!(!w1.contains(&v1, &tol()).unwrap());
        assert!(v1.contains(&v1, &tol()).unwrap());
        let e1 = Subspace::coordinate(3, &[0]);
        let e2 = Subspace::coordinate(3, &[1]);
        assert!(!e2.contains(&e1, &tol()).unwrap());
        assert!(e1.contains(&Subspace::coordinate(4, &[0]), &tol()).is_err());
    }

    #[test]
    fn intersections() {
        let a = Subspace::coordinate(3, &[0, 1]);
        let b = Subspace::coordinate(3, &[1, 2]);
        let c = a.intersection(&b, &tol()).unwrap();
        assert!(c.same_as(&Subspace::coordinate(3, &[1]), &tol()).unwrap());
        assert!(a.intersection(&a, &tol()).unwrap().same_as(&a, &tol()).unwrap());

        // span{e1,e2,e3} ∩ span{e4} in ℝ⁴
        let h1 = Subspace::coordinate(4, &[0, 1, 2]);
        let h2 = Subspace::coordinate(4, &[3]);
        assert!(h1.intersection(&h2, &tol()).unwrap().is_zero());
    }

    #[test]
    fn sums() {
        let s = Subspace::sum(
            3,
            &[&Subspace::coordinate(3, &[0]), &Subspace::coordinate(3, &[1])],
            &tol(),
        )
        .unwrap();
        assert!(s.same_as(&Subspace::coordinate(3, &[0, 1]), &tol()).unwrap());
        assert!(Subspace::sum(5, &[], &tol()).unwrap().is_zero());
        let w1 = Subspace::coordinate(4, &[0, 1]);
        let w2 = Subspace::coordinate(4, &[1, 2]);
        let h = Subspace::sum(4, &[&w1, &w2], &tol()).unwrap();
        assert!(h.same_as(&Subspace::coordinate(4, &[0, 1, 2]), &tol()).unwrap());
    }

    #[test]
    fn complements() {
        let c = Subspace::coordinate(3, &[0]).orthogonal_complement();
        assert!(c.same_as(&Subspace::coordinate(3, &[1, 2]), &tol()).unwrap());
        assert!(Subspace::full(3).orthogonal_complement().is_zero());
        assert_eq!(Subspace::zero(3).orthogonal_complement().dim(), 3);
        let w = Subspace::span_of(3, &[&[1.0, 1.0, 0.0]], &tol()).unwrap();
        let wc = w.orthogonal_complement();
        let sum = &w.projector() + &wc.projector();
        assert!(sum.max_abs_diff(&Matrix::identity(3)) < 1e-12);
    }

    #[test]
    fn images() {
        let s = Subspace::coordinate(3, &[2]);
        let u = Matrix::diag(&[1.0, 1.0, 0.5]);
        assert!(s.image(&u, &tol()).unwrap().same_as(&s, &tol()).unwrap());
        let id = Matrix::identity(3);
        let w = Subspace::span_of(3, &[&[1.0, 2.0, 3.0]], &tol()).unwrap();
        assert!(w.image(&id, &tol()).unwrap().same_as(&w, &tol()).unwrap());
        // singular map may drop rank
        let p = Matrix::diag(&[1.0, 0.0, 0.0]);
        assert_eq!(Subspace::coordinate(3, &[1, 2]).image(&p, &tol()).unwrap().dim(), 0);
    }

    #[test]
    fn canonical_basis_is_coordinate_aligned() {
        let s = Subspace::span_of(
            4,
            &[&[1.0, 1.0, 0.0, 0.0], &[1.0, -1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]],
            &tol(),
        )
        .unwrap()
        .canonical_basis(&tol());
        for (k, col) in s.basis_vectors().iter().enumerate() {
            assert!(col.max_abs_diff(&Vector::unit(4, k)) < 1e-12);
        }
    }
}
