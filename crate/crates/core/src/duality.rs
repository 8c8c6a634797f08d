//! Dual fusion frames in the sense `Σ ωᵢ νᵢ π_{Vᵢ} S_W⁻¹ π_{Wᵢ} = I`, the
//! component-preserving picture, and the lift between the two.

use crate::error::{Error, Result};
use crate::fusion::FusionFrame;
use crate::linalg::{Matrix, Subspace, Tolerance};

/// A frame together with a candidate dual family. The per-member
/// reconstruction pieces `ωᵢ νᵢ π_{Vᵢ} S_W⁻¹ π_{Wᵢ}` are computed once.
#[derive(Clone, Debug)]
pub struct DualPair {
    primal: FusionFrame,
    dual: FusionFrame,
    s_inv: Matrix,
    components: Vec<Matrix>,
    duality_residual: f64,
}

impl DualPair {
    pub fn new(primal: FusionFrame, dual: FusionFrame, tol: &Tolerance) -> Result<Self> {
        if primal.len() != dual.len() {
            return Err(Error::MemberCountMismatch {
                primal: primal.len(),
                dual: dual.len(),
            });
        }
        if primal.ambient_dim() != dual.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: primal.ambient_dim(),
                found: dual.ambient_dim(),
            });
        }
        let s_inv = primal.frame_operator_inverse(tol)?;
        let components: Vec<Matrix> = primal
            .members()
            .iter()
            .zip(dual.members())
            .map(|(w, v)| {
                let piece = &(&v.subspace.projector() * &s_inv) * &w.subspace.projector();
                piece.scale(w.weight * v.weight)
            })
            .collect();
        let n = primal.ambient_dim();
        let recon = components.iter().fold(Matrix::zeros(n, n), |acc, c| &acc + c);
        let duality_residual = (&recon - &Matrix::identity(n)).frobenius_norm();
        Ok(DualPair {
            primal,
            dual,
            s_inv,
            components,
            duality_residual,
        })
    }

    /// The frame paired with its canonical dual.
    pub fn canonical(primal: FusionFrame, tol: &Tolerance) -> Result<Self> {
        let dual = primal.canonical_dual(tol)?;
        DualPair::new(primal, dual, tol)
    }

    pub fn primal(&self) -> &FusionFrame {
        &self.primal
    }

    pub fn dual(&self) -> &FusionFrame {
        &self.dual
    }

    pub fn len(&self) -> usize {
        self.primal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primal.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.primal.ambient_dim()
    }

    pub fn frame_operator_inverse(&self) -> &Matrix {
        &self.s_inv
    }

    /// `ωᵢ νᵢ π_{Vᵢ} S_W⁻¹ π_{Wᵢ}`
    pub fn component(&self, i: usize) -> &Matrix {
        &self.components[i]
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn duality_residual(&self) -> f64 {
        self.duality_residual
    }

    pub fn is_dual(&self, tol: &Tolerance) -> bool {
        self.duality_residual <= tol.residual_eps
    }

    /// `Σᵢ ωᵢ νᵢ π_{Vᵢ} S_W⁻¹ π_{Wᵢ}`
    pub fn reconstruction(&self) -> Matrix {
        let n = self.ambient_dim();
        self.components.iter().fold(Matrix::zeros(n, n), |acc, c| &acc + c)
    }

    /// Dual members that fail to span are allowed; this flags them.
    pub fn dual_is_frame(&self, tol: &Tolerance) -> bool {
        self.dual.is_frame(tol)
    }

    pub(crate) fn require_dual(&self, tol: &Tolerance) -> Result<()> {
        if self.is_dual(tol) {
            Ok(())
        } else {
            Err(Error::NotDual {
                residual: self.duality_residual,
            })
        }
    }
}

#[derive(Clone, Debug)]
pub struct DualVerification {
    pub passes: bool,
    pub residual: f64,
    pub reconstruction: Matrix,
}

pub fn verify_dual(pair: &DualPair, tol: &Tolerance) -> DualVerification {
    DualVerification {
        passes: pair.is_dual(tol),
        residual: pair.duality_residual(),
        reconstruction: pair.reconstruction(),
    }
}

/// For a Riesz fusion basis, `(V, v)` is a dual iff `S_W⁻¹ Wᵢ ⊆ Vᵢ` for
/// every member (weights being equal). Cross-checked against the duality
/// residual.
pub fn riesz_dual_family_check(w: &FusionFrame, v: &FusionFrame, tol: &Tolerance) -> Result<bool> {
    if !w.classify(tol).is_riesz_fusion_basis {
        return Err(Error::Hypothesis("primal is not a Riesz fusion basis".into()));
    }
    if w.len() != v.len() {
        return Err(Error::MemberCountMismatch {
            primal: w.len(),
            dual: v.len(),
        });
    }
    let canon = w.canonical_dual(tol)?;
    let mut contained = true;
    for (c, d) in canon.members().iter().zip(v.members()) {
        contained &= d.subspace.contains(&c.subspace, tol)?;
    }
    if contained {
        let pair = DualPair::new(w.clone(), v.clone(), tol)?;
        debug_assert!(
            pair.is_dual(tol) || (0..w.len()).any(|i| (w.weight(i) - v.weight(i)).abs() > tol.residual_eps),
            "containment without duality, residual {}",
            pair.duality_residual()
        );
        // Containment alone forces duality only with matching weights.
        return Ok(pair.is_dual(tol));
    }
    Ok(false)
}

/// A left inverse `A` of the analysis map, stored as one n×n block per member
/// and applied as `f ↦ Σᵢ blockᵢ (ωᵢ π_{Wᵢ} f)`.
#[derive(Clone, Debug)]
pub struct LeftInverseMap {
    pub blocks: Vec<Matrix>,
}

impl LeftInverseMap {
    /// Checks `Σᵢ blockᵢ ωᵢ π_{Wᵢ} = I`.
    pub fn new(w: &FusionFrame, blocks: Vec<Matrix>, tol: &Tolerance) -> Result<Self> {
        if blocks.len() != w.len() {
            return Err(Error::MemberCountMismatch {
                primal: w.len(),
                dual: blocks.len(),
            });
        }
        let map = LeftInverseMap { blocks };
        let residual = map.left_inverse_residual(w);
        if residual > tol.residual_eps {
            return Err(Error::NotLeftInverse { residual });
        }
        Ok(map)
    }

    /// `A = T_V φ_vw`: blocks `νᵢ π_{Vᵢ} S_W⁻¹`.
    pub fn from_dual_pair(pair: &DualPair, tol: &Tolerance) -> Result<Self> {
        let blocks = pair
            .dual()
            .members()
            .iter()
            .map(|v| (&v.subspace.projector() * pair.frame_operator_inverse()).scale(v.weight))
            .collect();
        LeftInverseMap::new(pair.primal(), blocks, tol)
    }

    pub fn left_inverse_residual(&self, w: &FusionFrame) -> f64 {
        let n = w.ambient_dim();
        let total = self
            .blocks
            .iter()
            .zip(w.members())
            .fold(Matrix::zeros(n, n), |acc, (b, m)| {
                &acc + &(b * &m.subspace.projector()).scale(m.weight)
            });
        (&total - &Matrix::identity(n)).frobenius_norm()
    }

    /// Image of member `j`'s block on `Wⱼ`: the `j`-th component of `A Mⱼ 𝒲`.
    pub fn component_image(&self, w: &FusionFrame, j: usize, tol: &Tolerance) -> Result<Subspace> {
        w.subspace(j).image(&self.blocks[j], tol)
    }
}

/// True iff for every `j` the block image `A Mⱼ 𝒲` equals `Vⱼ`.
pub fn component_preserving_check(
    w: &FusionFrame,
    v: &FusionFrame,
    a: &LeftInverseMap,
    tol: &Tolerance,
) -> Result<bool> {
    if w.len() != v.len() {
        return Err(Error::MemberCountMismatch {
            primal: w.len(),
            dual: v.len(),
        });
    }
    let residual = a.left_inverse_residual(w);
    if residual > tol.residual_eps {
        return Err(Error::NotLeftInverse { residual });
    }
    for j in 0..w.len() {
        let img = a.component_image(w, j, tol)?;
        if !img.same_as(v.subspace(j), tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `X = {(π_{Vᵢ} S_W⁻¹ Wᵢ, νᵢ)}`: same reconstruction pieces as the pair,
/// and component preserving for `φ_vw`.
pub fn lift_to_component_preserving(pair: &DualPair, tol: &Tolerance) -> Result<FusionFrame> {
    pair.require_dual(tol)?;
    let s_inv = pair.frame_operator_inverse();
    let subspaces = pair
        .primal()
        .members()
        .iter()
        .zip(pair.dual().members())
        .map(|(w, v)| w.subspace.image(&(&v.subspace.projector() * s_inv), tol))
        .collect::<Result<Vec<_>>>()?;
    FusionFrame::weighted(pair.ambient_dim(), subspaces, Some(pair.dual().weights()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn span(n: usize, rows: &[&[f64]]) -> Subspace {
        Subspace::span_of(n, rows, &tol()).unwrap()
    }

    fn hyperplanes() -> FusionFrame {
        FusionFrame::uniform(
            3,
            vec![
                span(3, &[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
                span(3, &[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]),
            ],
        )
        .unwrap()
    }

    fn preserving_family() -> FusionFrame {
        FusionFrame::uniform(
            3,
            vec![
                span(3, &[&[0.0, 1.0, 0.0], &[1.0, 2.0, -0.5]]),
                span(3, &[&[1.0, 0.0, 0.0], &[-1.0, -2.0, 1.5]]),
            ],
        )
        .unwrap()
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
    fn canonical_pair_verifies() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let v = verify_dual(&pair, &tol());
        assert!(v.passes && v.residual < 1e-14);
    }

    #[test]
    fn preserving_family_is_not_dual() {
        let pair = DualPair::new(hyperplanes(), preserving_family(), &tol()).unwrap();
        let v = verify_dual(&pair, &tol());
        assert!(!v.passes);
        // (a, b, c) ↦ (a − c/5, b − 6c/25, 7c/25)
        let expect = Matrix::from_rows(&[
            vec![1.0, 0.0, -0.2],
            vec![0.0, 1.0, -6.0 / 25.0],
            vec![0.0, 0.0, 7.0 / 25.0],
        ])
        .unwrap();
        assert!(v.reconstruction.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn xi_family_verifies_for_any_parameters() {
        let xi = [0.4, -1.1, 2.0, 0.3, -0.6, 1.7, -2.2];
        let v = FusionFrame::uniform(
            4,
            vec![
                span(
                    4,
                    &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, xi[0], xi[1]]],
                ),
                span(
                    4,
                    &[&[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[xi[2], 0.0, 0.0, xi[3]]],
                ),
                span(4, &[&[0.0, 0.0, 0.0, 1.0], &[xi[4], xi[5], xi[6], 0.0]]),
            ],
        )
        .unwrap();
        let pair = DualPair::new(nonriesz_r4(), v, &tol()).unwrap();
        assert!(verify_dual(&pair, &tol()).passes);
    }

    #[test]
    fn member_count_mismatch() {
        let w = nonriesz_r4();
        let v = FusionFrame::uniform(4, vec![Subspace::full(4)]).unwrap();
        assert!(matches!(
            DualPair::new(w, v, &tol()),
            Err(Error::MemberCountMismatch { .. })
        ));
    }

    fn onb_r3() -> FusionFrame {
        FusionFrame::uniform(
            3,
            vec![
                span(3, &[&[1.0, 0.0, 1.0]]),
                span(3, &[&[-1.0, 0.0, 1.0], &[0.0, 1.0, 0.0]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn riesz_family_checks() {
        let w = onb_r3();
        let canon = w.canonical_dual(&tol()).unwrap();
        assert!(riesz_dual_family_check(&w, &canon, &tol()).unwrap());
        let v = FusionFrame::uniform(
            3,
            vec![span(3, &[&[1.0, 0.0, 1.0], &[1.0, 0.0, -1.0]]), w.subspace(1).clone()],
        )
        .unwrap();
        assert!(riesz_dual_family_check(&w, &v, &tol()).unwrap());
        // proper subspace of S_W⁻¹W₂
        let short = w.with_member(1, span(3, &[&[0.0, 1.0, 0.0]]));
        assert!(!riesz_dual_family_check(&w, &short, &tol()).unwrap());
        assert!(matches!(
            riesz_dual_family_check(&nonriesz_r4(), &nonriesz_r4(), &tol()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn displayed_left_inverse_is_component_preserving() {
        let w = hyperplanes();
        // A((0,x₂,x₃),(y₁,0,y₃)) = (x₃ + y₁ − y₃, x₂ + 2x₃ − 2y₃, −x₃/2 + 3y₃/2)
        let b1 = Matrix::from_rows(&[vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 2.0], vec![0.0, 0.0, -0.5]]).unwrap();
        let b2 = Matrix::from_rows(&[vec![1.0, 0.0, -1.0], vec![0.0, 0.0, -2.0], vec![0.0, 0.0, 1.5]]).unwrap();
        let a = LeftInverseMap::new(&w, vec![b1, b2], &tol()).unwrap();
        assert!(component_preserving_check(&w, &preserving_family(), &a, &tol()).unwrap());
    }

    #[test]
    fn bad_left_inverse_is_rejected() {
        let w = hyperplanes();
        let r = LeftInverseMap::new(&w, vec![Matrix::identity(3), Matrix::identity(3)], &tol());
        assert!(matches!(r, Err(Error::NotLeftInverse { .. })));
    }

    #[test]
    fn canonical_map_preserves_components() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let a = LeftInverseMap::from_dual_pair(&pair, &tol()).unwrap();
        assert!(component_preserving_check(pair.primal(), pair.dual(), &a, &tol()).unwrap());
    }

    #[test]
    fn enlarged_member_breaks_component_preservation() {
        let w = nonriesz_r4();
        let c = 2.5;
        let v = w.with_member(
            0,
            span(4, &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 0.0, c]]),
        );
        let pair = DualPair::new(w.clone(), v.clone(), &tol()).unwrap();
        assert!(pair.is_dual(&tol()));
        let a = LeftInverseMap::from_dual_pair(&pair, &tol()).unwrap();
        assert!(!component_preserving_check(&w, &v, &a, &tol()).unwrap());
    }

    #[test]
    fn lift_recovers_canonical_members() {
        let w = nonriesz_r4();
        let xi = [0.7, -0.2];
        let v = w.with_member(
            0,
            span(
                4,
                &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, xi[0], xi[1]]],
            ),
        );
        let pair = DualPair::new(w.clone(), v, &tol()).unwrap();
        let x = lift_to_component_preserving(&pair, &tol()).unwrap();
        assert!(x.subspace(0).same_as(w.subspace(0), &tol()).unwrap());
        let lifted = DualPair::new(w, x, &tol()).unwrap();
        assert!(lifted.is_dual(&tol()));
        for i in 0..3 {
            assert!(lifted.component(i).max_abs_diff(pair.component(i)) < 1e-12);
        }
    }

    #[test]
    fn lift_is_fixed_on_canonical() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let x = lift_to_component_preserving(&pair, &tol()).unwrap();
        assert!(x.same_as(pair.dual(), &tol()).unwrap());
    }

    #[test]
    fn lift_requires_dual() {
        let pair = DualPair::new(hyperplanes(), preserving_family(), &tol()).unwrap();
        assert!(matches!(
            lift_to_component_preserving(&pair, &tol()),
            Err(Error::NotDual { .. })
        ));
    }

    #[test]
    fn lift_drops_complement_direction() {
        // Appending a direction orthogonal to both S_W⁻¹W₃ and V₃ keeps duality;
        // the lift discards it again.
        let w = nonriesz_r4();
        let canon = w.canonical_dual(&tol()).unwrap();
        let extended = canon.with_member(2, Subspace::coordinate(4, &[3, 0]));
        let pair = DualPair::new(w, extended, &tol()).unwrap();
        let x = lift_to_component_preserving(&pair, &tol()).unwrap();
        assert_eq!(x.subspace(2).dim(), 1);
        assert!(x.subspace(2).contains_vector(&Vector::unit(4, 3), &tol()));
    }
}
