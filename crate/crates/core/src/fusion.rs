//! Weighted subspace families: frame operator, bounds, classification and
//! the canonical dual.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{spd_inverse, symmetric_eigen, Matrix, Subspace, Tolerance};

#[derive(Clone, Debug)]
pub struct Member {
    pub subspace: Subspace,
    pub weight: f64,
}

/// A weighted family of subspaces of ℝⁿ. Families that fail to span remain
/// representable; [`FusionFrame::is_frame`] reports it.
#[derive(Clone, Debug)]
pub struct FusionFrame {
    ambient_dim: usize,
    members: Vec<Member>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameClassification {
    pub is_frame: bool,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub is_tight: bool,
    pub is_parseval: bool,
    pub is_riesz_fusion_basis: bool,
    pub is_orthonormal_fusion_basis: bool,
    /// Some member is a proper subspace.
    pub is_non_trivial: bool,
}

impl FrameClassification {
    pub fn label(&self) -> &'static str {
        if !self.is_frame {
            "not a fusion frame"
        } else if self.is_orthonormal_fusion_basis {
            "orthonormal fusion basis"
        } else if self.is_riesz_fusion_basis {
            "Riesz fusion basis"
        } else if self.is_parseval {
            "Parseval fusion frame"
        } else if self.is_tight {
            "tight fusion frame"
        } else {
            "fusion frame"
        }
    }
}

impl FusionFrame {
    pub fn new(ambient_dim: usize, members: Vec<Member>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidInput("ambient dimension must be positive".into()));
        }
        if members.is_empty() {
            return Err(Error::InvalidInput("a fusion frame needs at least one member".into()));
        }
        for m in &members {
            if m.subspace.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: m.subspace.ambient_dim(),
                });
            }
            if !(m.weight > 0.0 && m.weight.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "weights must be positive and finite, got {}",
                    m.weight
                )));
            }
        }
        Ok(FusionFrame { ambient_dim, members })
    }

    /// Members with unit weights.
    pub fn uniform(ambient_dim: usize, subspaces: Vec<Subspace>) -> Result<Self> {
        Self::weighted(ambient_dim, subspaces, None)
    }

    pub fn weighted(ambient_dim: usize, subspaces: Vec<Subspace>, weights: Option<Vec<f64>>) -> Result<Self> {
        let weights = weights.unwrap_or_else(|| vec![1.0; subspaces.len()]);
        if weights.len() != subspaces.len() {
            return Err(Error::DimensionMismatch {
                expected: subspaces.len(),
                found: weights.len(),
            });
        }
        let members = subspaces
            .into_iter()
            .zip(weights)
            .map(|(subspace, weight)| Member { subspace, weight })
            .collect();
        FusionFrame::new(ambient_dim, members)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn subspace(&self, i: usize) -> &Subspace {
        &self.members[i].subspace
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.members[i].weight
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.weight).collect()
    }

    pub fn subspaces(&self) -> Vec<Subspace> {
        self.members.iter().map(|m| m.subspace.clone()).collect()
    }

    /// Same subspaces, new weights.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        FusionFrame::weighted(self.ambient_dim, self.subspaces(), Some(weights))
    }

    /// Replaces member `i`'s subspace, keeping its weight.
    pub fn with_member(&self, i: usize, subspace: Subspace) -> Self {
        let mut out = self.clone();
        out.members[i].subspace = subspace;
        out
    }

    /// `S_W = Σ ωᵢ² π_{Wᵢ}`
    pub fn frame_operator(&self) -> Matrix {
        let n = self.ambient_dim;
        self.members.iter().fold(Matrix::zeros(n, n), |acc, m| {
            &acc + &m.subspace.projector().scale(m.weight * m.weight)
        })
    }

    /// Optimal bounds `(A, B)`: extreme eigenvalues of the frame operator.
    pub fn frame_bounds(&self) -> (f64, f64) {
        let eig = symmetric_eigen(&self.frame_operator());
        (eig.smallest().max(0.0), eig.largest())
    }

    pub fn is_frame(&self, tol: &Tolerance) -> bool {
        self.frame_bounds().0 > tol.rank_eps
    }

    pub fn frame_operator_inverse(&self, tol: &Tolerance) -> Result<Matrix> {
        spd_inverse(&self.frame_operator(), tol).map_err(|e| match e {
            Error::NotPositiveDefinite { smallest } => Error::NotAFrame { lower_bound: smallest },
            other => other,
        })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.subspace.dim()).collect()
    }

    pub fn span(&self, tol: &Tolerance) -> Result<Subspace> {
        let parts: Vec<&Subspace> = self.members.iter().map(|m| &m.subspace).collect();
        Subspace::sum(self.ambient_dim, &parts, tol)
    }

    pub fn is_non_trivial(&self) -> bool {
        self.members.iter().any(|m| m.subspace.dim() < self.ambient_dim)
    }

    pub fn classify(&self, tol: &Tolerance) -> FrameClassification {
        let (a, b) = self.frame_bounds();
        let is_frame = a > tol.rank_eps;
        let scale = b.abs().max(1.0);
        let is_tight = is_frame && (b - a) <= tol.residual_eps * scale;
        let is_parseval = is_tight && (a - 1.0).abs() <= tol.residual_eps && (b - 1.0).abs() <= tol.residual_eps;
        let total_dim: usize = self.dims().iter().sum();
        let is_riesz = is_frame && total_dim == self.ambient_dim;
        let is_onb = is_riesz
            && self.members.iter().all(|m| (m.weight - 1.0).abs() <= tol.residual_eps)
            && self.pairwise_orthogonal(tol);
        FrameClassification {
            is_frame,
            lower_bound: a,
            upper_bound: b,
            is_tight,
            is_parseval,
            is_riesz_fusion_basis: is_riesz,
            is_orthonormal_fusion_basis: is_onb,
            is_non_trivial: self.is_non_trivial(),
        }
    }

    fn pairwise_orthogonal(&self, tol: &Tolerance) -> bool {
        let ps: Vec<Matrix> = self.members.iter().map(|m| m.subspace.projector()).collect();
        (0..ps.len()).all(|i| ((i + 1)..ps.len()).all(|j| (&ps[i] * &ps[j]).frobenius_norm() <= tol.residual_eps))
    }

    /// Riesz constants of the block synthesis map `⊕Wᵢ → ℝⁿ`, i.e. the extreme
    /// eigenvalues of `BᵀB` with `B` the concatenated member bases.
    pub fn riesz_constants(&self) -> (f64, f64) {
        let b = self.members.iter().fold(Matrix::zeros(self.ambient_dim, 0), |acc, m| {
            acc.hstack(m.subspace.basis())
        });
        if b.cols() == 0 {
            return (0.0, 0.0);
        }
        let eig = symmetric_eigen(&(&b.transpose() * &b));
        (eig.smallest().max(0.0), eig.largest())
    }

    /// `{(S_W⁻¹ Wᵢ, ωᵢ)}`
    pub fn canonical_dual(&self, tol: &Tolerance) -> Result<FusionFrame> {
        let s_inv = self.frame_operator_inverse(tol)?;
        self.image(&s_inv, tol)
    }

    /// `{(U Wᵢ, ωᵢ)}`
    pub fn image(&self, u: &Matrix, tol: &Tolerance) -> Result<FusionFrame> {
        let members = self
            .members
            .iter()
            .map(|m| {
                Ok(Member {
                    subspace: m.subspace.image(u, tol)?,
                    weight: m.weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FusionFrame {
            ambient_dim: self.ambient_dim,
            members,
        })
    }

    /// Member-wise mutual containment and equal weights.
    pub fn same_as(&self, other: &FusionFrame, tol: &Tolerance) -> Result<bool> {
        if self.len() != other.len() || self.ambient_dim != other.ambient_dim {
            return Ok(false);
        }
        for (a, b) in self.members.iter().zip(&other.members) {
            if (a.weight - b.weight).abs() > tol.residual_eps || !a.subspace.same_as(&b.subspace, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn nonriesz_r4() -> FusionFrame {
        FusionFrame::uniform(
            4,
            vec![
                Subspace::coordinate(4, &[0, 1]),
                Subspace::coordinate(4, &[1, 2]),
                Subspace::coordinate(4, &[3]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn orthonormal_basis_has_identity_operator() {
        let w = FusionFrame::uniform(3, (0..3).map(|k| Subspace::coordinate(3, &[k])).collect()).unwrap();
        assert!(w.frame_operator().max_abs_diff(&Matrix::identity(3)) < 1e-15);
        assert_eq!(w.frame_bounds(), (1.0, 1.0));
        let c = w.classify(&tol());
        assert!(c.is_parseval && c.is_orthonormal_fusion_basis);
    }

    #[test]
    fn nonriesz_operator_bounds_and_class() {
        let w = nonriesz_r4();
        assert!(w.frame_operator().max_abs_diff(&Matrix::diag(&[1.0, 2.0, 1.0, 1.0])) < 1e-15);
        let (a, b) = w.frame_bounds();
        assert!((a - 1.0).abs() < 1e-14 && (b - 2.0).abs() < 1e-14);
        let c = w.classify(&tol());
        assert!(c.is_frame && !c.is_riesz_fusion_basis && !c.is_tight);
        assert_eq!(c.label(), "fusion frame");
        let dual = w.canonical_dual(&tol()).unwrap();
        assert!(dual.same_as(&w, &tol()).unwrap());
    }

    #[test]
    fn non_spanning_family() {
        let w = FusionFrame::uniform(2, vec![Subspace::coordinate(2, &[0])]).unwrap();
        let (a, _) = w.frame_bounds();
        assert_eq!(a, 0.0);
        assert!(!w.classify(&tol()).is_frame);
        assert!(matches!(w.canonical_dual(&tol()), Err(Error::NotAFrame { .. })));
    }

    #[test]
    fn orthonormal_fusion_basis_r3() {
        let w1 = Subspace::span_of(3, &[&[1.0, 0.0, 1.0]], &tol()).unwrap();
        let w2 = Subspace::span_of(3, &[&[-1.0, 0.0, 1.0], &[0.0, 1.0, 0.0]], &tol()).unwrap();
        let w = FusionFrame::uniform(3, vec![w1, w2]).unwrap();
        let c = w.classify(&tol());
        assert!(c.is_orthonormal_fusion_basis && c.is_riesz_fusion_basis && c.is_parseval);
        let (ra, rb) = w.riesz_constants();
        assert!((ra - 1.0).abs() < 1e-12 && (rb - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trivial_single_member() {
        let w = FusionFrame::uniform(3, vec![Subspace::full(3)]).unwrap();
        let c = w.classify(&tol());
        assert!(c.is_parseval && c.is_riesz_fusion_basis && !c.is_non_trivial);
    }

    #[test]
    fn hyperplane_pair_canonical_dual() {
        // W₁ = e₁^⊥, W₂ = e₂^⊥ in ℝ³: S_W⁻¹(a,b,c) = (a, b, c/2)
        let w = FusionFrame::uniform(
            3,
            vec![
                Subspace::coordinate(3, &[0]).orthogonal_complement(),
                Subspace::coordinate(3, &[1]).orthogonal_complement(),
            ],
        )
        .unwrap();
        let s_inv = w.frame_operator_inverse(&tol()).unwrap();
        assert!(s_inv.max_abs_diff(&Matrix::diag(&[1.0, 1.0, 0.5])) < 1e-14);
        assert!(w.canonical_dual(&tol()).unwrap().same_as(&w, &tol()).unwrap());
    }

    #[test]
    fn rejects_bad_weights() {
        let r = FusionFrame::weighted(2, vec![Subspace::full(2)], Some(vec![0.0]));
        assert!(r.is_err());
        assert!(FusionFrame::uniform(2, vec![]).is_err());
    }
}
