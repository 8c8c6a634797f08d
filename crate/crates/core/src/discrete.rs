//! Finite vector frames, their duals, and the passage from a fusion frame to
//! a vector frame indexed by (member, basis vector) pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::FusionFrame;
use crate::linalg::{min_norm_solve, spd_inv_sqrt, spd_inverse, Matrix, Tolerance, Vector};

/// `(member i, basis vector j)`, both 0-based.
pub type Label = (usize, usize);

#[derive(Clone, Debug)]
pub struct DiscreteFrame {
    ambient_dim: usize,
    vectors: Vec<Vector>,
    labels: Option<Vec<Label>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BridgeMode {
    /// `ωᵢ π_{Wᵢ} S_W⁻¹ eⱼ`
    CanonicalWeighted,
    /// `π_{S_W^{-1/2} Wᵢ} eⱼ`, unit weights only
    ParsevalSqrt,
}

impl DiscreteFrame {
    pub fn new(ambient_dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        Self::build(ambient_dim, vectors, None)
    }

    pub fn labelled(ambient_dim: usize, vectors: Vec<Vector>, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != vectors.len() {
            return Err(Error::DimensionMismatch {
                expected: vectors.len(),
                found: labels.len(),
            });
        }
        Self::build(ambient_dim, vectors, Some(labels))
    }

    fn build(ambient_dim: usize, vectors: Vec<Vector>, labels: Option<Vec<Label>>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidInput("ambient dimension must be positive".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: v.dim(),
            });
        }
        Ok(DiscreteFrame {
            ambient_dim,
            vectors,
            labels,
        })
    }

    pub fn from_rows(ambient_dim: usize, rows: &[&[f64]]) -> Result<Self> {
        let vs = rows
            .iter()
            .map(|r| Vector::new(r.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        DiscreteFrame::new(ambient_dim, vs)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &Vector {
        &self.vectors[k]
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    /// Indices carrying label member `i`: the block `Λᵢ = {(i, j)}`.
    pub fn block(&self, member: usize) -> Vec<usize> {
        match &self.labels {
            Some(l) => l
                .iter()
                .enumerate()
                .filter(|(_, lab)| lab.0 == member)
                .map(|(k, _)| k)
                .collect(),
            None => Vec::new(),
        }
    }

    /// Synthesis matrix `θ` with the frame vectors as columns.
    pub fn synthesis(&self) -> Matrix {
        Matrix::from_columns(self.ambient_dim, &self.vectors)
    }

    /// `S_F = Σ fᵢ fᵢᵀ`
    pub fn frame_operator(&self) -> Matrix {
        let t = self.synthesis();
        &t * &t.transpose()
    }

    pub fn is_frame(&self, tol: &Tolerance) -> bool {
        spd_inverse(&self.frame_operator(), tol).is_ok()
    }

    /// `{S_F⁻¹ fᵢ}`, labels preserved.
    pub fn canonical_dual(&self, tol: &Tolerance) -> Result<DiscreteFrame> {
        let s_inv = spd_inverse(&self.frame_operator(), tol).map_err(|e| match e {
            Error::NotPositiveDefinite { smallest } => Error::NotAFrame { lower_bound: smallest },
            other => other,
        })?;
        Ok(self.map_vectors(|v| s_inv.apply(v)))
    }

    fn map_vectors(&self, f: impl Fn(&Vector) -> Vector) -> DiscreteFrame {
        DiscreteFrame {
            ambient_dim: self.ambient_dim,
            vectors: self.vectors.iter().map(f).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Drops vectors with norm at most `residual_eps`. Returns the compacted
    /// frame and, for each kept vector, its index in `self`.
    pub fn compact_nonzero(&self, tol: &Tolerance) -> (DiscreteFrame, Vec<usize>) {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&k| self.vectors[k].norm() > tol.residual_eps)
            .collect();
        (self.select(&keep), keep)
    }

    /// Sub-family at the given indices, labels carried along.
    pub fn select(&self, idx: &[usize]) -> DiscreteFrame {
        DiscreteFrame {
            ambient_dim: self.ambient_dim,
            vectors: idx.iter().map(|&k| self.vectors[k].clone()).collect(),
            labels: self.labels.as_ref().map(|l| idx.iter().map(|&k| l[k]).collect()),
        }
    }

    /// `Σ gᵢ fᵢᵀ` over the given indices (all when `None`).
    pub fn cross_operator(&self, other: &DiscreteFrame, idx: Option<&[usize]>) -> Matrix {
        let n = self.ambient_dim;
        let all: Vec<usize>;
        let idx = match idx {
            Some(i) => i,
            None => {
                all = (0..self.len()).collect();
                &all
            }
        };
        idx.iter().fold(Matrix::zeros(n, n), |acc, &k| {
            &acc + &Matrix::outer(&self.vectors[k], &other.vectors[k])
        })
    }
}

/// A family `{uᵢ}` with `Σ ⟨·, uᵢ⟩ fᵢ = 0`, i.e. `Σ fᵢ uᵢᵀ = 0`.
#[derive(Clone, Debug)]
pub struct DualPerturbation {
    pub u_vectors: Vec<Vector>,
}

impl DualPerturbation {
    pub fn zero(frame: &DiscreteFrame) -> Self {
        DualPerturbation {
            u_vectors: vec![Vector::zeros(frame.ambient_dim()); frame.len()],
        }
    }

    /// `‖Σ fᵢ uᵢᵀ‖_F`
    pub fn residual(&self, frame: &DiscreteFrame) -> Result<f64> {
        if self.u_vectors.len() != frame.len() {
            return Err(Error::DimensionMismatch {
                expected: frame.len(),
                found: self.u_vectors.len(),
            });
        }
        let n = frame.ambient_dim();
        let m = frame
            .vectors()
            .iter()
            .zip(&self.u_vectors)
            .fold(Matrix::zeros(n, n), |acc, (f, u)| &acc + &Matrix::outer(f, u));
        Ok(m.frobenius_norm())
    }

    /// Projects arbitrary vectors onto the admissible set: each coordinate
    /// sequence is pushed into the kernel of the synthesis map.
    pub fn project(frame: &DiscreteFrame, raw: Vec<Vector>, tol: &Tolerance) -> Result<Self> {
        if raw.len() != frame.len() {
            return Err(Error::DimensionMismatch {
                expected: frame.len(),
                found: raw.len(),
            });
        }
        let n = frame.ambient_dim();
        let theta = frame.synthesis(); // n × m
                                       // Rows of R are the raw uᵢ; U = (I − θᵀ S⁻¹ θ) R.
        let r = Matrix::from_columns(n, &raw).transpose(); // m × n
        let s_inv = spd_inverse(&frame.frame_operator(), tol)?;
        let correction = &(&theta.transpose() * &s_inv) * &(&theta * &r);
        let u = &r - &correction;
        Ok(DualPerturbation {
            u_vectors: u.transpose().columns(),
        })
    }
}

/// Returns `(passes, ‖Σ gᵢ fᵢᵀ − I‖_F)`.
pub fn verify_discrete_dual(f: &DiscreteFrame, g: &DiscreteFrame, tol: &Tolerance) -> Result<(bool, f64)> {
    if f.len() != g.len() {
        return Err(Error::MemberCountMismatch {
            primal: f.len(),
            dual: g.len(),
        });
    }
    if f.ambient_dim() != g.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.ambient_dim(),
            found: g.ambient_dim(),
        });
    }
    let recon = g.cross_operator(f, None);
    let residual = (&recon - &Matrix::identity(f.ambient_dim())).frobenius_norm();
    Ok((residual <= tol.residual_eps, residual))
}

/// `{S_F⁻¹ fᵢ + uᵢ}`
pub fn dual_from_perturbation(f: &DiscreteFrame, u: &DualPerturbation, tol: &Tolerance) -> Result<DiscreteFrame> {
    let residual = u.residual(f)?;
    if residual > tol.residual_eps {
        return Err(Error::InvalidPerturbation { residual });
    }
    let canon = f.canonical_dual(tol)?;
    let vectors = canon.vectors().iter().zip(&u.u_vectors).map(|(c, d)| c + d).collect();
    Ok(DiscreteFrame {
        ambient_dim: f.ambient_dim(),
        vectors,
        labels: f.labels.clone(),
    })
}

/// Dual of `f` that halves the canonical reconstruction on the erased set:
/// `uₖ = −½ S_F⁻¹ fₖ` for `k ∈ erased`, the remaining `uₖ` the minimum-norm
/// solution of `Σ fₖ uₖᵀ = 0`. Fails when no such completion exists.
pub fn halving_dual(f: &DiscreteFrame, erased: &[usize], tol: &Tolerance) -> Result<DiscreteFrame> {
    let m = f.len();
    let n = f.ambient_dim();
    for &k in erased {
        if k >= m {
            return Err(Error::IndexOutOfRange { index: k, total: m });
        }
    }
    let canon = f.canonical_dual(tol)?;
    let mut u = vec![Vector::zeros(n); m];
    let mut fixed = Matrix::zeros(n, n);
    for &k in erased {
        u[k] = canon.vector(k).scale(-0.5);
        fixed = &fixed + &Matrix::outer(f.vector(k), &u[k]);
    }
    let free: Vec<usize> = (0..m).filter(|k| !erased.contains(k)).collect();
    let a = f.synthesis().select_columns(&free); // n × |free|
    let rhs = fixed.scale(-1.0); // n × n, row-major target for Σ fₖ uₖᵀ
    let (sol, residual) = min_norm_solve(&a, &rhs, tol); // |free| × n
    if residual > tol.residual_eps {
        return Err(Error::Infeasible(format!(
            "no perturbation completes the halving on {:?} (residual {:e})",
            erased.iter().map(|k| k + 1).collect::<Vec<_>>(),
            residual
        )));
    }
    for (row, &k) in free.iter().enumerate() {
        u[k] = Vector::from_vec_unchecked(sol.row(row).to_vec());
    }
    dual_from_perturbation(f, &DualPerturbation { u_vectors: u }, tol)
}

fn check_orthonormal_basis(n: usize, basis: &[Vector], tol: &Tolerance) -> Result<Matrix> {
    if basis.len() != n {
        return Err(Error::NonOrthonormalBasis {
            deviation: f64::INFINITY,
        });
    }
    if let Some(b) = basis.iter().find(|b| b.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }
    let e = Matrix::from_columns(n, basis);
    let dev = (&e.transpose() * &e).max_abs_diff(&Matrix::identity(n));
    if dev > tol.residual_eps {
        return Err(Error::NonOrthonormalBasis { deviation: dev });
    }
    Ok(e)
}

/// Vector frame `{ωᵢ π_{Wᵢ} S_W⁻¹ eⱼ}` or `{π_{S_W^{-1/2} Wᵢ} eⱼ}` over all
/// `(i, j)`, member-major, labelled. Zero vectors are kept.
pub fn bridge_fusion_to_discrete(
    w: &FusionFrame,
    basis: &[Vector],
    mode: BridgeMode,
    tol: &Tolerance,
) -> Result<DiscreteFrame> {
    let n = w.ambient_dim();
    check_orthonormal_basis(n, basis, tol)?;
    let mut vectors = Vec::with_capacity(w.len() * n);
    let mut labels = Vec::with_capacity(w.len() * n);
    match mode {
        BridgeMode::CanonicalWeighted => {
            let s_inv = w.frame_operator_inverse(tol)?;
            for (i, m) in w.members().iter().enumerate() {
                let op = (&m.subspace.projector() * &s_inv).scale(m.weight);
                for (j, e) in basis.iter().enumerate() {
                    vectors.push(op.apply(e));
                    labels.push((i, j));
                }
            }
        }
        BridgeMode::ParsevalSqrt => {
            if let Some(m) = w.members().iter().find(|m| (m.weight - 1.0).abs() > tol.residual_eps) {
                return Err(Error::Hypothesis(format!(
                    "parseval_sqrt bridge needs unit weights, found {}",
                    m.weight
                )));
            }
            let root = spd_inv_sqrt(&w.frame_operator(), tol).map_err(|_| Error::NotAFrame {
                lower_bound: w.frame_bounds().0,
            })?;
            for (i, m) in w.members().iter().enumerate() {
                let p = m.subspace.image(&root, tol)?.projector();
                for (j, e) in basis.iter().enumerate() {
                    vectors.push(p.apply(e));
                    labels.push((i, j));
                }
            }
        }
    }
    DiscreteFrame::labelled(n, vectors, labels)
}

/// `{νᵢ π_{Vᵢ} eⱼ}` with labels aligned to [`bridge_fusion_to_discrete`].
pub fn bridge_dual_to_discrete(v: &FusionFrame, basis: &[Vector], tol: &Tolerance) -> Result<DiscreteFrame> {
    let n = v.ambient_dim();
    check_orthonormal_basis(n, basis, tol)?;
    let mut vectors = Vec::with_capacity(v.len() * n);
    let mut labels = Vec::with_capacity(v.len() * n);
    for (i, m) in v.members().iter().enumerate() {
        let p = m.subspace.projector().scale(m.weight);
        for (j, e) in basis.iter().enumerate() {
            vectors.push(p.apply(e));
            labels.push((i, j));
        }
    }
    DiscreteFrame::labelled(n, vectors, labels)
}

pub fn standard_basis(n: usize) -> Vec<Vector> {
    (0..n).map(|k| Vector::unit(n, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subspace;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn v(x: &[f64]) -> Vector {
        Vector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn standard_basis_is_self_dual() {
        let f = DiscreteFrame::new(3, standard_basis(3)).unwrap();
        assert!(f.frame_operator().max_abs_diff(&Matrix::identity(3)) < 1e-15);
        let c = f.canonical_dual(&tol()).unwrap();
        for k in 0..3 {
            assert!(c.vector(k).max_abs_diff(f.vector(k)) < 1e-15);
        }
        assert!(verify_discrete_dual(&f, &c, &tol()).unwrap().0);
    }

    #[test]
    fn non_parseval_frame_is_not_self_dual() {
        let f = DiscreteFrame::from_rows(2, &[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]).unwrap();
        let (ok, res) = verify_discrete_dual(&f, &f, &tol()).unwrap();
        assert!(!ok && res > 0.5);
        let c = f.canonical_dual(&tol()).unwrap();
        assert!(verify_discrete_dual(&f, &c, &tol()).unwrap().0);
    }

    #[test]
    fn length_mismatch_errors() {
        let f = DiscreteFrame::new(2, standard_basis(2)).unwrap();
        let g = DiscreteFrame::from_rows(2, &[&[1.0, 0.0]]).unwrap();
        assert!(verify_discrete_dual(&f, &g, &tol()).is_err());
    }

    #[test]
    fn zero_perturbation_gives_canonical() {
        let f = DiscreteFrame::from_rows(2, &[&[1.0, 0.0], &[0.0, 2.0], &[1.0, 1.0]]).unwrap();
        let g = dual_from_perturbation(&f, &DualPerturbation::zero(&f), &tol()).unwrap();
        let c = f.canonical_dual(&tol()).unwrap();
        for k in 0..3 {
            assert!(g.vector(k).max_abs_diff(c.vector(k)) < 1e-15);
        }
    }

    #[test]
    fn invalid_perturbation_is_rejected() {
        let f = DiscreteFrame::from_rows(2, &[&[1.0, 0.0], &[0.0, 2.0], &[1.0, 1.0]]).unwrap();
        let u = DualPerturbation {
            u_vectors: vec![v(&[1.0, 0.0]), v(&[0.0, 0.0]), v(&[0.0, 0.0])],
        };
        assert!(matches!(
            dual_from_perturbation(&f, &u, &tol()),
            Err(Error::InvalidPerturbation { .. })
        ));
    }

    #[test]
    fn projected_perturbations_are_admissible() {
        let f = DiscreteFrame::from_rows(2, &[&[1.0, 0.0], &[0.0, 2.0], &[1.0, 1.0], &[-1.0, 3.0]]).unwrap();
        let raw = vec![v(&[0.3, -1.0]), v(&[2.0, 0.1]), v(&[-0.7, 0.7]), v(&[1.0, 1.0])];
        let u = DualPerturbation::project(&f, raw, &tol()).unwrap();
        assert!(u.residual(&f).unwrap() < 1e-12);
        let g = dual_from_perturbation(&f, &u, &tol()).unwrap();
        assert!(verify_discrete_dual(&f, &g, &tol()).unwrap().0);
    }

    #[test]
    fn bridge_of_trivial_frame_is_the_basis() {
        let w = FusionFrame::uniform(3, vec![Subspace::full(3)]).unwrap();
        let f = bridge_fusion_to_discrete(&w, &standard_basis(3), BridgeMode::CanonicalWeighted, &tol()).unwrap();
        for k in 0..3 {
            assert!(f.vector(k).max_abs_diff(&Vector::unit(3, k)) < 1e-15);
        }
        assert_eq!(f.labels().unwrap(), &[(0, 0), (0, 1), (0, 2)]);
    }

    #[test]
    fn bridge_rejects_non_orthonormal_basis() {
        let w = FusionFrame::uniform(2, vec![Subspace::full(2)]).unwrap();
        let bad = vec![v(&[1.0, 0.0]), v(&[1.0, 1.0])];
        assert!(matches!(
            bridge_fusion_to_discrete(&w, &bad, BridgeMode::CanonicalWeighted, &tol()),
            Err(Error::NonOrthonormalBasis { .. })
        ));
        assert!(bridge_dual_to_discrete(&w, &bad, &tol()).is_err());
    }

    #[test]
    fn parseval_bridge_needs_unit_weights() {
        let w = FusionFrame::weighted(2, vec![Subspace::full(2)], Some(vec![2.0])).unwrap();
        assert!(matches!(
            bridge_fusion_to_discrete(&w, &standard_basis(2), BridgeMode::ParsevalSqrt, &tol()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn zero_member_bridges_to_zero_block() {
        let v = FusionFrame::uniform(2, vec![Subspace::zero(2), Subspace::full(2)]).unwrap();
        let g = bridge_dual_to_discrete(&v, &standard_basis(2), &tol()).unwrap();
        assert_eq!(g.block(0), vec![0, 1]);
        assert!(g.vector(0).norm() == 0.0 && g.vector(1).norm() == 0.0);
    }
}
