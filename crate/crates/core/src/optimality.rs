//! Sufficient conditions for optimal duals under one erasure, constructions
//! of further optimal duals, and transport of dual pairs by linear maps.
//!
//! Optimality is either certified through a sufficient condition or refuted
//! by exhibiting a dual with a smaller worst-case error. Failing to refute is
//! never reported as optimality.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::discrete::{
    bridge_dual_to_discrete, bridge_fusion_to_discrete, dual_from_perturbation, verify_discrete_dual, BridgeMode,
    DiscreteFrame, DualPerturbation,
};
use crate::duality::{lift_to_component_preserving, DualPair};
use crate::erasures::{discrete_worst_case, worst_case_error, ErasureMask, ErasureReport, NormKind};
use crate::error::{Error, Result};
use crate::fusion::FusionFrame;
use crate::linalg::{min_norm_solve, spd_inv_sqrt, spd_inverse, Matrix, Subspace, Tolerance, Vector};
use crate::sampling;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// Canonical dual; the members off the maximal set must be Riesz.
    Canonical,
    /// A given dual; the members on the maximal set must be Riesz.
    Dual,
    /// Tight frame with constant `ωᵢ²√dim Wᵢ`.
    TightUniform,
    /// Riesz fusion basis: every dual is optimal.
    RieszBasis,
}

/// Which index set the Riesz hypothesis is imposed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RieszSide {
    Maximal,
    Complement,
    Whole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedOptimal,
    NotApplicable,
}

/// Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub c_value: f64,
    pub lambda1: Vec<usize>,
    pub lambda2: Vec<usize>,
    pub h1_dim: usize,
    pub h2_dim: usize,
    pub intersection_dim: usize,
    pub riesz_side: RieszSide,
    pub lambda_side_riesz: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d1_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d1_bound: Option<f64>,
    pub verdict: Verdict,
    /// Some member differs from the whole space.
    pub non_trivial: bool,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedOptimal
    }
}

fn near_max(values: &[f64], tol: &Tolerance) -> (f64, Vec<usize>, Vec<usize>) {
    let c = values.iter().copied().fold(0.0, f64::max);
    let slack = tol.residual_eps * c.max(1.0);
    let (l1, l2): (Vec<usize>, Vec<usize>) = (0..values.len()).partition(|&i| values[i] >= c - slack);
    (c, l1, l2)
}

struct Split {
    h1: Subspace,
    h2: Subspace,
    intersection_dim: usize,
}

fn split_spans(w: &FusionFrame, l1: &[usize], l2: &[usize], tol: &Tolerance) -> Result<Split> {
    let n = w.ambient_dim();
    let span = |idx: &[usize]| {
        let parts: Vec<&Subspace> = idx.iter().map(|&i| w.subspace(i)).collect();
        Subspace::sum(n, &parts, tol)
    };
    let h1 = span(l1)?;
    let h2 = span(l2)?;
    let intersection_dim = h1.intersection(&h2, tol)?.dim();
    Ok(Split {
        h1,
        h2,
        intersection_dim,
    })
}

/// Members at `idx` form a Riesz fusion basis for their span `h`: the
/// dimensions add up. Vacuous for an empty index set.
fn riesz_within(w: &FusionFrame, idx: &[usize], h: &Subspace) -> bool {
    idx.iter().map(|&i| w.subspace(i).dim()).sum::<usize>() == h.dim()
}

/// Checks the sufficient condition for the canonical dual: with
/// `c = max ωᵢ² ‖S_W⁻¹ π_{Wᵢ}‖_F`, `Λ₁` the maximisers and `Hⱼ` the span of
/// the members in `Λⱼ`, require `H₁ ∩ H₂ = {0}` and `{Wᵢ}_{Λ₂}` Riesz in `H₂`.
pub fn certify_canonical_optimal(w: &FusionFrame, tol: &Tolerance) -> Result<Certificate> {
    let s_inv = w.frame_operator_inverse(tol)?;
    let values: Vec<f64> = w
        .members()
        .iter()
        .map(|m| m.weight * m.weight * (&s_inv * &m.subspace.projector()).frobenius_norm())
        .collect();
    let (c, l1, l2) = near_max(&values, tol);
    let split = split_spans(w, &l1, &l2, tol)?;
    let riesz = riesz_within(w, &l2, &split.h2);
    let ok = split.intersection_dim == 0 && riesz;
    let mut notes = Vec::new();
    if split.intersection_dim > 0 {
        notes.push(format!("H1 and H2 meet in dimension {}", split.intersection_dim));
    }
    if !riesz {
        notes.push("members off the maximal set are not a Riesz fusion basis for their span".into());
    }
    if ok {
        notes.push("canonical dual is optimal for one erasure".into());
        notes.push("it is also the unique P-optimal dual under this condition (recorded, not checked)".into());
    }
    Ok(Certificate {
        kind: CertificateKind::Canonical,
        c_value: c,
        lambda1: l1,
        lambda2: l2,
        h1_dim: split.h1.dim(),
        h2_dim: split.h2.dim(),
        intersection_dim: split.intersection_dim,
        riesz_side: RieszSide::Complement,
        lambda_side_riesz: riesz,
        d1_value: Some(c),
        d1_bound: None,
        non_trivial: w.is_non_trivial(),
        verdict: if ok {
            Verdict::CertifiedOptimal
        } else {
            Verdict::NotApplicable
        },
        notes,
    })
}

/// Same construction driven by the pair's own values
/// `c_v = max ωᵢ νᵢ ‖π_{Vᵢ} S_W⁻¹ π_{Wᵢ}‖_F`; here the maximal set carries the
/// Riesz hypothesis.
pub fn certify_dual_optimal(pair: &DualPair, tol: &Tolerance) -> Result<Certificate> {
    pair.require_dual(tol)?;
    let w = pair.primal();
    let values: Vec<f64> = pair.components().iter().map(Matrix::frobenius_norm).collect();
    let (c, l1, l2) = near_max(&values, tol);
    let split = split_spans(w, &l1, &l2, tol)?;
    let riesz = riesz_within(w, &l1, &split.h1);
    let ok = split.intersection_dim == 0 && riesz;
    let mut notes = Vec::new();
    if split.intersection_dim > 0 {
        notes.push(format!("H1 and H2 meet in dimension {}", split.intersection_dim));
    }
    if !riesz {
        notes.push("members on the maximal set are not a Riesz fusion basis for their span".into());
    }
    Ok(Certificate {
        kind: CertificateKind::Dual,
        c_value: c,
        lambda1: l1,
        lambda2: l2,
        h1_dim: split.h1.dim(),
        h2_dim: split.h2.dim(),
        intersection_dim: split.intersection_dim,
        riesz_side: RieszSide::Maximal,
        lambda_side_riesz: riesz,
        d1_value: Some(c),
        d1_bound: None,
        non_trivial: w.is_non_trivial(),
        verdict: if ok {
            Verdict::CertifiedOptimal
        } else {
            Verdict::NotApplicable
        },
        notes,
    })
}

/// `w` α-tight with `ωᵢ² √dim Wᵢ = c` for all `i`, `v` a dual with
/// `max νᵢ/ωᵢ ≤ 1`. On success `d₁ ≤ c/α` is recorded and checked.
pub fn certify_tight_uniform(w: &FusionFrame, v: &FusionFrame, tol: &Tolerance) -> Certificate {
    let m = w.len();
    let class = w.classify(tol);
    let consts: Vec<f64> = w
        .members()
        .iter()
        .map(|mb| mb.weight * mb.weight * (mb.subspace.dim() as f64).sqrt())
        .collect();
    let (c, _, _) = near_max(&consts, tol);
    let c_min = consts.iter().copied().fold(f64::INFINITY, f64::min);
    let uniform = c - c_min <= tol.residual_eps * c.max(1.0);
    let mut notes = Vec::new();
    if !class.is_tight {
        notes.push(format!(
            "not tight: bounds ({}, {})",
            class.lower_bound, class.upper_bound
        ));
    }
    if !uniform {
        notes.push("weights squared times root dimension are not constant".into());
    }
    let mut d1_value = None;
    let mut d1_bound = None;
    let mut lambda1: Vec<usize> = (0..m).collect();
    let mut lambda2 = Vec::new();
    let mut is_dual = false;
    let mut ratio_ok = false;
    match DualPair::new(w.clone(), v.clone(), tol) {
        Ok(pair) => {
            is_dual = pair.is_dual(tol);
            if !is_dual {
                notes.push(format!("not a dual: residual {:e}", pair.duality_residual()));
            }
            let ratio = (0..m).map(|i| v.weight(i) / w.weight(i)).fold(0.0, f64::max);
            ratio_ok = ratio <= 1.0 + tol.residual_eps;
            if !ratio_ok {
                notes.push(format!("max dual-to-primal weight ratio {ratio} exceeds 1"));
            }
            let values: Vec<f64> = pair.components().iter().map(Matrix::frobenius_norm).collect();
            let (d1, l1, l2) = near_max(&values, tol);
            lambda1 = l1;
            lambda2 = l2;
            d1_value = Some(d1);
        }
        Err(e) => notes.push(format!("pair rejected: {e}")),
    }
    let ok = class.is_tight && uniform && is_dual && ratio_ok;
    if ok {
        let bound = c / class.lower_bound;
        d1_bound = Some(bound);
        if let Some(d1) = d1_value {
            if d1 > bound + tol.residual_eps * bound.max(1.0) {
                notes.push(format!("d1 {d1} exceeds c/alpha {bound}"));
            }
        }
    }
    Certificate {
        kind: CertificateKind::TightUniform,
        c_value: c,
        lambda1,
        lambda2,
        h1_dim: 0,
        h2_dim: 0,
        intersection_dim: 0,
        riesz_side: RieszSide::Whole,
        lambda_side_riesz: class.is_riesz_fusion_basis,
        d1_value,
        d1_bound,
        non_trivial: w.is_non_trivial(),
        verdict: if ok {
            Verdict::CertifiedOptimal
        } else {
            Verdict::NotApplicable
        },
        notes,
    }
}

/// For a Riesz fusion basis the duals are exactly the families with
/// `S_W⁻¹ Wᵢ ⊆ Vᵢ`, all with the canonical error values.
pub fn certify_riesz_basis(pair: &DualPair, tol: &Tolerance) -> Certificate {
    let w = pair.primal();
    let riesz = w.classify(tol).is_riesz_fusion_basis;
    let dual = pair.is_dual(tol);
    let values: Vec<f64> = pair.components().iter().map(Matrix::frobenius_norm).collect();
    let (c, l1, l2) = near_max(&values, tol);
    let mut notes = Vec::new();
    if !riesz {
        notes.push("primal is not a Riesz fusion basis".into());
    }
    if !dual {
        notes.push(format!("not a dual: residual {:e}", pair.duality_residual()));
    }
    Certificate {
        kind: CertificateKind::RieszBasis,
        c_value: c,
        lambda1: l1,
        lambda2: l2,
        h1_dim: 0,
        h2_dim: 0,
        intersection_dim: 0,
        riesz_side: RieszSide::Whole,
        lambda_side_riesz: riesz,
        d1_value: Some(c),
        d1_bound: None,
        non_trivial: w.is_non_trivial(),
        verdict: if riesz && dual {
            Verdict::CertifiedOptimal
        } else {
            Verdict::NotApplicable
        },
        notes,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ExpansionKind {
    /// `Vᵢ = (S_W⁻¹Wᵢ)^⊥`, replaced by `{0}`.
    ZeroComponent,
    /// `(S_W⁻¹Wᵢ)^⊥ ⊊ Vᵢ`, replaced by `S_W⁻¹Wᵢ ∩ Vᵢ`.
    Trimmed,
    /// `Vᵢ ⊕ span{u}` with `u ⊥ Vᵢ` and `u ⊥ S_W⁻¹Wᵢ`.
    Extended { direction: Vec<f64> },
}

#[derive(Clone, Debug)]
pub struct ExpansionVariant {
    pub member: usize,
    pub kind: ExpansionKind,
    pub dual: FusionFrame,
}

/// Further optimal duals obtained by modifying member `i` of a dual without
/// touching any reconstruction piece. Each variant is checked to be a dual
/// with identical worst-case reports for `r ≤ min(2, m − 1)`.
pub fn expand_optimal_family(pair: &DualPair, i: usize, tol: &Tolerance) -> Result<Vec<ExpansionVariant>> {
    expand_optimal_family_checked(pair, i, 2, tol)
}

/// As [`expand_optimal_family`], checking reports for every `r ≤ max_r`.
pub fn expand_optimal_family_checked(
    pair: &DualPair,
    i: usize,
    max_r: usize,
    tol: &Tolerance,
) -> Result<Vec<ExpansionVariant>> {
    pair.require_dual(tol)?;
    let m = pair.len();
    if i >= m {
        return Err(Error::IndexOutOfRange { index: i, total: m });
    }
    let s_inv = pair.frame_operator_inverse();
    let canon_i = pair.primal().subspace(i).image(s_inv, tol)?;
    let canon_perp = canon_i.orthogonal_complement();
    let v_i = pair.dual().subspace(i);
    let mut variants = Vec::new();
    if !canon_perp.is_zero() && v_i.contains(&canon_perp, tol)? {
        if canon_perp.same_as(v_i, tol)? {
            variants.push(ExpansionVariant {
                member: i,
                kind: ExpansionKind::ZeroComponent,
                dual: pair.dual().with_member(i, Subspace::zero(pair.ambient_dim())),
            });
        } else {
            variants.push(ExpansionVariant {
                member: i,
                kind: ExpansionKind::Trimmed,
                dual: pair.dual().with_member(i, canon_i.intersection(v_i, tol)?),
            });
        }
    }
    let room = v_i.orthogonal_complement().intersection(&canon_perp, tol)?;
    for u in room.canonical_basis(tol).basis_vectors() {
        let mut vs = v_i.basis_vectors();
        vs.push(u.clone());
        let z = Subspace::span(pair.ambient_dim(), &vs, tol)?;
        variants.push(ExpansionVariant {
            member: i,
            kind: ExpansionKind::Extended {
                direction: u.into_vec(),
            },
            dual: pair.dual().with_member(i, z),
        });
    }
    let top = max_r.min(m.saturating_sub(1));
    let baseline: Vec<ErasureReport> = (1..=top)
        .map(|r| worst_case_error(pair, r, NormKind::Frobenius, tol))
        .collect::<Result<_>>()?;
    for var in &variants {
        let p = DualPair::new(pair.primal().clone(), var.dual.clone(), tol)?;
        p.require_dual(tol)?;
        for (r, base) in (1..=top).zip(&baseline) {
            let rep = worst_case_error(&p, r, NormKind::Frobenius, tol)?;
            let slack = tol.residual_eps * base.worst_value.max(1.0);
            if (rep.worst_value - base.worst_value).abs() > slack {
                return Err(Error::Hypothesis(format!(
                    "variant at member {} changes the {r}-erasure value from {} to {}",
                    i + 1,
                    base.worst_value,
                    rep.worst_value
                )));
            }
        }
    }
    Ok(variants)
}

/// Parseval frame `F = {π_{S_W^{-1/2}Wᵢ} eⱼ}` from a unit-weight Riesz fusion
/// basis, and one dual `{π_{Vᵢ} eⱼ}` per extension family.
#[derive(Clone, Debug)]
pub struct ParsevalFamily {
    pub basis: Vec<Vector>,
    pub frame: DiscreteFrame,
    pub duals: Vec<DiscreteFrame>,
    /// Operator-norm single-erasure value of each dual.
    pub d1: Vec<f64>,
}

/// Orthonormal basis starting with one unit vector from each
/// `S_W^{-1/2}Wᵢ` (its first canonical direction), completed against the
/// standard basis in index order.
pub fn parseval_basis(w: &FusionFrame, tol: &Tolerance) -> Result<Vec<Vector>> {
    let n = w.ambient_dim();
    let root = spd_inv_sqrt(&w.frame_operator(), tol)?;
    let mut seeds = Vec::new();
    for m in w.members() {
        let s = m.subspace.image(&root, tol)?;
        if let Some(v) = s.canonical_basis(tol).basis_vectors().into_iter().next() {
            seeds.push(v);
        }
    }
    seeds.extend((0..n).map(|k| Vector::unit(n, k)));
    crate::linalg::orthonormal_sequence(n, &seeds, tol)
}

/// Builds `F` over `basis` (or [`parseval_basis`] when `None`) and the dual
/// for each family `V` in `extensions`, which must satisfy
/// `S_W^{-1/2}Wᵢ ⊆ Vᵢ`. A supplied basis must be orthonormal and contain a
/// vector lying in some `S_W^{-1/2}Wᵢ`.
pub fn parseval_optimal_family(
    w: &FusionFrame,
    extensions: &[Vec<Subspace>],
    basis: Option<&[Vector]>,
    tol: &Tolerance,
) -> Result<ParsevalFamily> {
    let class = w.classify(tol);
    if !class.is_riesz_fusion_basis {
        return Err(Error::Hypothesis("not a Riesz fusion basis".into()));
    }
    if w.members().iter().any(|m| (m.weight - 1.0).abs() > tol.residual_eps) {
        return Err(Error::Hypothesis("weights must all be 1".into()));
    }
    let n = w.ambient_dim();
    let root = spd_inv_sqrt(&w.frame_operator(), tol)?;
    let targets = w.image(&root, tol)?;
    let basis = match basis {
        Some(b) => {
            let hit = b
                .iter()
                .any(|e| e.dim() == n && targets.members().iter().any(|t| t.subspace.contains_vector(e, tol)));
            if !hit {
                return Err(Error::Hypothesis("no basis vector lies in any S^(-1/2) W_i".into()));
            }
            b.to_vec()
        }
        None => parseval_basis(w, tol)?,
    };
    let frame = bridge_fusion_to_discrete(w, &basis, BridgeMode::ParsevalSqrt, tol)?;
    let mut duals = Vec::new();
    let mut d1 = Vec::new();
    for family in extensions {
        if family.len() != w.len() {
            return Err(Error::MemberCountMismatch {
                primal: w.len(),
                dual: family.len(),
            });
        }
        for (i, v) in family.iter().enumerate() {
            if !v.contains(targets.subspace(i), tol)? {
                return Err(Error::Hypothesis(format!(
                    "extension {} does not contain S^(-1/2) W_{}",
                    i + 1,
                    i + 1
                )));
            }
        }
        let v = FusionFrame::uniform(n, family.clone())?;
        let g = bridge_dual_to_discrete(&v, &basis, tol)?;
        let (ok, residual) = verify_discrete_dual(&frame, &g, tol)?;
        if !ok {
            return Err(Error::NotDual { residual });
        }
        d1.push(discrete_worst_case(&frame, &g, 1, NormKind::Operator, tol)?.worst_value);
        duals.push(g);
    }
    Ok(ParsevalFamily {
        basis,
        frame,
        duals,
        d1,
    })
}

/// Per member `i`: `(‖θ_G D_{Λᵢ} θ_F*‖_F, ‖θ_{S_F⁻¹F} D_{Λᵢ} θ_F*‖_F)` with
/// `F` the canonical-weighted bridge of a Riesz fusion basis and
/// `G = S_F⁻¹F + u`.
pub fn riesz_bridge_partial_optimal(
    w: &FusionFrame,
    basis: &[Vector],
    u: &DualPerturbation,
    tol: &Tolerance,
) -> Result<Vec<(f64, f64)>> {
    if !w.classify(tol).is_riesz_fusion_basis {
        return Err(Error::Hypothesis("not a Riesz fusion basis".into()));
    }
    let f = bridge_fusion_to_discrete(w, basis, BridgeMode::CanonicalWeighted, tol)?;
    let g = dual_from_perturbation(&f, u, tol)?;
    let canon = f.canonical_dual(tol)?;
    (0..w.len())
        .map(|i| {
            let mask = ErasureMask::new(f.len(), f.block(i))?;
            let a = g.cross_operator(&f, Some(mask.erased())).frobenius_norm();
            let b = canon.cross_operator(&f, Some(mask.erased())).frobenius_norm();
            Ok((a, b))
        })
        .collect()
}

/// `(uW, uV)` for orthogonal `u`.
pub fn transport_by_unitary(pair: &DualPair, u: &Matrix, tol: &Tolerance) -> Result<DualPair> {
    let n = pair.ambient_dim();
    if u.rows() != n || u.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.rows(),
        });
    }
    let deviation = (&u.transpose() * u).max_abs_diff(&Matrix::identity(n));
    if deviation > tol.residual_eps {
        return Err(Error::NotUnitary { deviation });
    }
    DualPair::new(pair.primal().image(u, tol)?, pair.dual().image(u, tol)?, tol)
}

/// `(uW, uV)` for invertible `u` with `uᵀu Wᵢ ⊆ Wᵢ` and `uᵀu Vᵢ ⊆ Vᵢ`.
/// Failing member indices (0-based) are reported together.
pub fn transport_by_invertible(pair: &DualPair, u: &Matrix, tol: &Tolerance) -> Result<DualPair> {
    let n = pair.ambient_dim();
    if u.rows() != n || u.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.rows(),
        });
    }
    let gram = &u.transpose() * u;
    spd_inverse(&gram, tol).map_err(|_| Error::InvalidInput("transport map is singular".into()))?;
    let mut bad = Vec::new();
    for i in 0..pair.len() {
        let w_ok = pair.primal().subspace(i).image(&gram, tol)?;
        let v_ok = pair.dual().subspace(i).image(&gram, tol)?;
        let ok = pair.primal().subspace(i).contains(&w_ok, tol)? && pair.dual().subspace(i).contains(&v_ok, tol)?;
        if !ok {
            bad.push(i);
        }
    }
    if !bad.is_empty() {
        return Err(Error::InvarianceFailure { indices: bad });
    }
    DualPair::new(pair.primal().image(u, tol)?, pair.dual().image(u, tol)?, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeVerdict {
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeOutcome {
    pub verdict: ProbeVerdict,
    pub baseline: f64,
    pub best_value: f64,
    pub probes_evaluated: usize,
    pub probes_rejected: usize,
    #[serde(skip)]
    pub witness: Option<FusionFrame>,
}

/// Searches random duals for one with a strictly smaller single-erasure
/// Frobenius value than `pair`. Probe families: superspaces of the canonical
/// dual, their expansion variants and component-preserving lifts, weight
/// perturbations along the kernel of `c ↦ Σ cᵢ ωᵢ S_W⁻¹ π_{Wᵢ}`, and random
/// subspace families with least-squares weights.
pub fn probe_refutation(pair: &DualPair, samples: usize, seed: u64, tol: &Tolerance) -> Result<ProbeOutcome> {
    pair.require_dual(tol)?;
    let w = pair.primal();
    let n = w.ambient_dim();
    let m = w.len();
    let mut rng = StdRng::seed_from_u64(seed);
    let d1 = |p: &DualPair| -> f64 { p.components().iter().map(Matrix::frobenius_norm).fold(0.0, f64::max) };
    let baseline = d1(pair);
    let slack = tol.residual_eps * baseline.max(1.0);
    let s_inv = pair.frame_operator_inverse().clone();
    // Columns: vec(ωᵢ S_W⁻¹ π_{Wᵢ}).
    let pieces: Vec<Matrix> = w
        .members()
        .iter()
        .map(|mb| (&s_inv * &mb.subspace.projector()).scale(mb.weight))
        .collect();
    let design = Matrix::from_fn(n * n, m, |r, i| pieces[i].as_slice()[r]);
    let target = Matrix::from_fn(n * n, 1, |r, _| if r / n == r % n { 1.0 } else { 0.0 });
    let canon = w.canonical_dual(tol)?;

    let mut best = f64::INFINITY;
    let mut witness = None;
    let mut evaluated = 0;
    let mut rejected = 0;
    let mut consider = |cand: Option<FusionFrame>| {
        let Some(cand) = cand else {
            rejected += 1;
            return;
        };
        match DualPair::new(w.clone(), cand.clone(), tol) {
            Ok(p) if p.is_dual(tol) => {
                evaluated += 1;
                let v = d1(&p);
                if v < best {
                    best = v;
                    witness = Some(cand);
                }
            }
            _ => rejected += 1,
        }
    };

    for k in 0..samples {
        match k % 4 {
            0 => consider(Some(sampling::random_superspace_dual(&mut rng, w, tol)?)),
            1 => {
                let v = sampling::random_superspace_dual(&mut rng, w, tol)?;
                let p = DualPair::new(w.clone(), v, tol)?;
                let i = rng.gen_range(0..m);
                for var in expand_optimal_family_checked(&p, i, 0, tol)? {
                    consider(Some(var.dual));
                }
                consider(Some(lift_to_component_preserving(&p, tol)?));
            }
            2 => {
                // Weight perturbations along the kernel of the design map.
                let pert = sampling::random_matrix(&mut rng, m, 1);
                let (proj, _) = min_norm_solve(&design, &(&design * &pert), tol);
                let null = &pert - &proj;
                let base = w.weights();
                let t = rng.gen_range(-1.0..1.0);
                let weights: Vec<f64> = (0..m).map(|i| base[i] + t * null[(i, 0)]).collect();
                let cand = if weights.iter().all(|&x| x > tol.rank_eps) {
                    FusionFrame::weighted(n, canon.subspaces(), Some(weights)).ok()
                } else {
                    None
                };
                consider(cand);
            }
            _ => {
                let subspaces: Vec<Subspace> = (0..m)
                    .map(|i| {
                        let k = rng.gen_range(w.subspace(i).dim().max(1)..=n);
                        sampling::random_subspace(&mut rng, n, k, tol)
                    })
                    .collect();
                let cols: Vec<Matrix> = subspaces.iter().zip(&pieces).map(|(v, p)| &v.projector() * p).collect();
                let a = Matrix::from_fn(n * n, m, |r, i| cols[i].as_slice()[r]);
                let (nu, residual) = min_norm_solve(&a, &target, tol);
                let weights: Vec<f64> = (0..m).map(|i| nu[(i, 0)]).collect();
                let cand = if residual <= tol.residual_eps && weights.iter().all(|&x| x > tol.rank_eps) {
                    FusionFrame::weighted(n, subspaces, Some(weights)).ok()
                } else {
                    None
                };
                consider(cand);
            }
        }
    }
    let refuted = best < baseline - slack;
    Ok(ProbeOutcome {
        verdict: if refuted {
            ProbeVerdict::Refuted
        } else {
            ProbeVerdict::Inconclusive
        },
        baseline,
        best_value: best,
        probes_evaluated: evaluated,
        probes_rejected: rejected,
        witness: if refuted { witness } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::standard_basis;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn span(n: usize, rows: &[&[f64]]) -> Subspace {
        Subspace::span_of(n, rows, &tol()).unwrap()
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
    fn canonical_certificate_nonriesz() {
        let c = certify_canonical_optimal(&nonriesz_r4(), &tol()).unwrap();
        assert!((c.c_value - 1.25f64.sqrt()).abs() < 1e-12);
        assert_eq!(c.lambda1, vec![0, 1]);
        assert_eq!(c.lambda2, vec![2]);
        assert_eq!((c.h1_dim, c.h2_dim, c.intersection_dim), (3, 1, 0));
        assert!(c.is_certified());
    }

    #[test]
    fn canonical_certificate_orthonormal_plane() {
        let w = FusionFrame::uniform(2, vec![Subspace::coordinate(2, &[0]), Subspace::coordinate(2, &[1])]).unwrap();
        let c = certify_canonical_optimal(&w, &tol()).unwrap();
        assert_eq!(c.lambda1, vec![0, 1]);
        assert!(c.lambda2.is_empty());
        assert!(c.is_certified());
    }

    #[test]
    fn canonical_certificate_overlap() {
        // W₃ straddles H₁ and the rest.
        let w = FusionFrame::uniform(
            3,
            vec![
                Subspace::coordinate(3, &[0]),
                Subspace::coordinate(3, &[0, 1]),
                span(3, &[&[0.0, 1.0, 1.0]]),
            ],
        )
        .unwrap();
        let c = certify_canonical_optimal(&w, &tol()).unwrap();
        assert!(c.intersection_dim > 0 || !c.lambda_side_riesz);
        assert!(!c.is_certified());
    }

    #[test]
    fn dual_certificate_nonriesz_is_computed() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let c = certify_dual_optimal(&pair, &tol()).unwrap();
        assert_eq!(c.lambda1, vec![0, 1]);
        // dims 2 + 2 exceed dim H₁ = 3
        assert!(!c.lambda_side_riesz);
        assert!(!c.is_certified());
    }

    #[test]
    fn dual_certificate_orthonormal_basis() {
        let pair = DualPair::canonical(onb_r3(), &tol()).unwrap();
        let c = certify_dual_optimal(&pair, &tol()).unwrap();
        assert!(c.is_certified());
    }

    #[test]
    fn tight_certificates() {
        let w = FusionFrame::uniform(3, (0..3).map(|k| Subspace::coordinate(3, &[k])).collect()).unwrap();
        let c = certify_tight_uniform(&w, &w, &tol());
        assert!(c.is_certified());
        assert!((c.d1_bound.unwrap() - 1.0).abs() < 1e-12);
        let heavy = w.with_weights(vec![1.0, 2.0, 1.0]).unwrap();
        assert!(!certify_tight_uniform(&w, &heavy, &tol()).is_certified());
        let nr = nonriesz_r4();
        assert!(!certify_tight_uniform(&nr, &nr.canonical_dual(&tol()).unwrap(), &tol()).is_certified());
    }

    #[test]
    fn expansion_of_third_member() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let vars = expand_optimal_family(&pair, 2, &tol()).unwrap();
        assert_eq!(vars.len(), 3);
        let first = &vars[0];
        assert_eq!(
            first.kind,
            ExpansionKind::Extended {
                direction: vec![1.0, 0.0, 0.0, 0.0]
            }
        );
        assert!(first
            .dual
            .subspace(2)
            .same_as(&Subspace::coordinate(4, &[0, 3]), &tol())
            .unwrap());
    }

    #[test]
    fn expansion_zero_component() {
        // V₃ = (S_W⁻¹W₃)^⊥ contributes nothing; the pair stays dual.
        let w = nonriesz_r4();
        let v = w.canonical_dual(&tol()).unwrap();
        let v = v.with_member(2, Subspace::coordinate(4, &[3]));
        let pair = DualPair::new(w.clone(), v, &tol()).unwrap();
        assert!(expand_optimal_family(&pair, 2, &tol()).unwrap().len() == 3);

        let w2 = FusionFrame::uniform(
            2,
            vec![
                Subspace::coordinate(2, &[0]),
                Subspace::coordinate(2, &[1]),
                Subspace::coordinate(2, &[0]),
            ],
        )
        .unwrap();
        // S = diag(2,1); member 3 can be dropped to its complement if member 1 doubles up.
        let v2 = FusionFrame::weighted(
            2,
            vec![
                Subspace::coordinate(2, &[0]),
                Subspace::coordinate(2, &[1]),
                Subspace::coordinate(2, &[1]),
            ],
            Some(vec![2.0, 1.0, 1.0]),
        )
        .unwrap();
        let pair2 = DualPair::new(w2, v2, &tol()).unwrap();
        assert!(pair2.is_dual(&tol()));
        let vars = expand_optimal_family(&pair2, 2, &tol()).unwrap();
        assert_eq!(vars.len(), 1);
        assert_eq!(vars[0].kind, ExpansionKind::ZeroComponent);
        assert!(vars[0].dual.subspace(2).is_zero());
    }

    #[test]
    fn expansion_trimmed() {
        let w = nonriesz_r4();
        let v = w.canonical_dual(&tol()).unwrap().with_member(2, Subspace::full(4));
        let pair = DualPair::new(w, v, &tol()).unwrap();
        let vars = expand_optimal_family(&pair, 2, &tol()).unwrap();
        assert_eq!(vars.len(), 1);
        assert_eq!(vars[0].kind, ExpansionKind::Trimmed);
        assert!(vars[0]
            .dual
            .subspace(2)
            .same_as(&Subspace::coordinate(4, &[3]), &tol())
            .unwrap());
    }

    #[test]
    fn expansion_empty_on_full_member() {
        let w = onb_r3();
        let pair = DualPair::canonical(w, &tol()).unwrap();
        // S_W⁻¹W₁ ⊕ S_W⁻¹W₂ = ℝ³ leaves no room and no complement inside Vᵢ.
        assert!(expand_optimal_family(&pair, 0, &tol()).unwrap().len() <= 2);
        let full = FusionFrame::uniform(2, vec![Subspace::full(2)]).unwrap();
        let p = DualPair::canonical(full, &tol()).unwrap();
        assert!(expand_optimal_family(&p, 0, &tol()).unwrap().is_empty());
    }

    #[test]
    fn parseval_displayed_family() {
        let w = onb_r3();
        let ext = vec![
            vec![span(3, &[&[1.0, 0.0, 1.0], &[1.0, 0.0, -1.0]]), w.subspace(1).clone()],
            w.subspaces(),
        ];
        let fam = parseval_optimal_family(&w, &ext, Some(&standard_basis(3)), &tol()).unwrap();
        assert!(fam.frame.frame_operator().max_abs_diff(&Matrix::identity(3)) < 1e-12);
        let f0 = fam.frame.vector(0).as_slice().to_vec();
        assert!((f0[0] - 0.5).abs() < 1e-12 && f0[1].abs() < 1e-12 && (f0[2] - 0.5).abs() < 1e-12);
        for d in &fam.d1 {
            assert!((d - 1.0).abs() < 1e-9);
        }
        assert!(fam.duals[1]
            .vectors()
            .iter()
            .zip(fam.frame.vectors())
            .all(|(a, b)| a.max_abs_diff(b) < 1e-12));
    }

    #[test]
    fn parseval_default_basis_is_orthonormal() {
        let w = onb_r3();
        let fam = parseval_optimal_family(&w, &[w.subspaces()], None, &tol()).unwrap();
        let e = Matrix::from_columns(3, &fam.basis);
        assert!((&e.transpose() * &e).max_abs_diff(&Matrix::identity(3)) < 1e-12);
        assert!((fam.d1[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn parseval_hypotheses() {
        assert!(matches!(
            parseval_optimal_family(&nonriesz_r4(), &[], None, &tol()),
            Err(Error::Hypothesis(_))
        ));
        let w = onb_r3();
        let bad = vec![vec![span(3, &[&[0.0, 1.0, 0.0]]), w.subspace(1).clone()]];
        assert!(matches!(
            parseval_optimal_family(&w, &bad, None, &tol()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn riesz_bridge_zero_perturbation() {
        let w = onb_r3();
        let basis = standard_basis(3);
        let f = bridge_fusion_to_discrete(&w, &basis, BridgeMode::CanonicalWeighted, &tol()).unwrap();
        let rows = riesz_bridge_partial_optimal(&w, &basis, &DualPerturbation::zero(&f), &tol()).unwrap();
        for (a, b) in rows {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(
            riesz_bridge_partial_optimal(&nonriesz_r4(), &standard_basis(4), &DualPerturbation::zero(&f), &tol()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn invertible_transport_diagonal() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let u = Matrix::diag(&[1.0, 1.0, 1.0, 2.0]);
        let t = transport_by_invertible(&pair, &u, &tol()).unwrap();
        assert!(t.is_dual(&tol()));
    }

    #[test]
    fn invertible_transport_reports_indices() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let mut u = Matrix::identity(4);
        u[(0, 2)] = 1.0;
        match transport_by_invertible(&pair, &u, &tol()) {
            Err(Error::InvarianceFailure { indices }) => assert!(!indices.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unitary_transport_rejects_shear() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let mut u = Matrix::identity(4);
        u[(0, 1)] = 0.5;
        assert!(matches!(
            transport_by_unitary(&pair, &u, &tol()),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn permutation_transport() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let p = Matrix::from_rows(&[
            vec![0.0, 0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let t = transport_by_unitary(&pair, &p, &tol()).unwrap();
        assert!(t
            .primal()
            .subspace(0)
            .same_as(&Subspace::coordinate(4, &[1, 2]), &tol())
            .unwrap());
        let a = worst_case_error(&pair, 1, NormKind::Frobenius, &tol()).unwrap();
        let b = worst_case_error(&t, 1, NormKind::Frobenius, &tol()).unwrap();
        assert_eq!(a.argmax_subsets, b.argmax_subsets);
        assert!((a.worst_value - b.worst_value).abs() < 1e-12);
    }

    #[test]
    fn probe_on_certified_frame_is_inconclusive() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let out = probe_refutation(&pair, 80, 11, &tol()).unwrap();
        assert_eq!(out.verdict, ProbeVerdict::Inconclusive);
        assert!(out.probes_evaluated > 0);
    }

    #[test]
    fn probe_refutes_a_poor_dual() {
        // Four lines in the plane; the canonical dual is not the only choice of weights.
        let w = FusionFrame::uniform(
            2,
            vec![
                span(2, &[&[1.0, 0.0]]),
                span(2, &[&[0.0, 1.0]]),
                span(2, &[&[1.0, 1.0]]),
                span(2, &[&[1.0, -1.0]]),
            ],
        )
        .unwrap();
        let canon = w.canonical_dual(&tol()).unwrap();
        // Shift weight between the two diagonal members.
        let s_inv = w.frame_operator_inverse(&tol()).unwrap();
        assert!(s_inv.max_abs_diff(&Matrix::identity(2).scale(0.5)) < 1e-12);
        let heavy = FusionFrame::weighted(2, canon.subspaces(), Some(vec![1.6, 1.6, 0.4, 0.4])).unwrap();
        let pair = DualPair::new(w, heavy, &tol()).unwrap();
        assert!(pair.is_dual(&tol()));
        let out = probe_refutation(&pair, 80, 5, &tol()).unwrap();
        assert_eq!(out.verdict, ProbeVerdict::Refuted);
        assert!(out.best_value < out.baseline);
        assert!(out.witness.is_some());
    }
}
