//! Erasure masks, error operators and exhaustive worst-case erasure errors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::discrete::{verify_discrete_dual, DiscreteFrame};
use crate::duality::DualPair;
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, Matrix, Tolerance};

/// Largest number of subsets a worst-case computation will enumerate.
pub const ENUMERATION_CAP: u128 = 1_000_000;

/// Relative tolerance for ties in the argmax.
pub const TIE_RELATIVE: f64 = 1e-12;

/// A set of erased indices out of `total`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErasureMask {
    total: usize,
    erased: Vec<usize>,
}

impl ErasureMask {
    /// Indices are 0-based; duplicates are merged.
    pub fn new(total: usize, erased: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut erased: Vec<usize> = erased.into_iter().collect();
        erased.sort_unstable();
        erased.dedup();
        if let Some(&bad) = erased.iter().find(|&&k| k >= total) {
            return Err(Error::IndexOutOfRange { index: bad, total });
        }
        Ok(ErasureMask { total, erased })
    }

    pub fn empty(total: usize) -> Self {
        ErasureMask {
            total,
            erased: Vec::new(),
        }
    }

    pub fn all(total: usize) -> Self {
        ErasureMask {
            total,
            erased: (0..total).collect(),
        }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn erased(&self) -> &[usize] {
        &self.erased
    }

    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }

    /// The diagonal 0/1 vector `D`.
    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.total];
        for &k in &self.erased {
            d[k] = 1.0;
        }
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    Frobenius,
    Operator,
}

impl NormKind {
    pub fn eval(self, a: &Matrix, tol: &Tolerance) -> f64 {
        match self {
            NormKind::Frobenius => a.frobenius_norm(),
            NormKind::Operator => operator_norm(a, tol),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::Frobenius => "frobenius",
            NormKind::Operator => "operator",
        })
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "frobenius" | "fro" | "f" => Ok(NormKind::Frobenius),
            "operator" | "op" | "spectral" | "2" => Ok(NormKind::Operator),
            other => Err(Error::InvalidInput(format!("unknown norm `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetValue {
    pub subset: Vec<usize>,
    pub value: f64,
}

/// Result of an exhaustive worst-case search. Subsets are 0-based and sorted
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErasureReport {
    pub r: usize,
    pub total: usize,
    pub norm_kind: NormKind,
    pub worst_value: f64,
    pub argmax_subsets: Vec<Vec<usize>>,
    pub subsets_evaluated: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_subset_values: Option<Vec<SubsetValue>>,
}

/// `C(m, r)` without overflow for anything this crate can enumerate.
pub fn binomial(m: usize, r: usize) -> u128 {
    if r > m {
        return 0;
    }
    let r = r.min(m - r) as u128;
    let m = m as u128;
    let mut acc: u128 = 1;
    for k in 0..r {
        acc = acc.saturating_mul(m - k) / (k + 1);
    }
    acc
}

/// r-subsets of `0..m` in lexicographic order.
#[derive(Clone, Debug)]
pub struct Combinations {
    m: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(m: usize, r: usize) -> Self {
        let current = if r <= m { Some((0..r).collect()) } else { None };
        Combinations { m, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let c = self.current.as_mut().unwrap();
        let r = c.len();
        let mut i = r;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if c[i] < self.m - r + i {
                c[i] += 1;
                for k in i + 1..r {
                    c[k] = c[k - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

fn check_r(r: usize, m: usize) -> Result<()> {
    if r == 0 || r >= m {
        return Err(Error::ErasureCountOutOfRange { r, m });
    }
    let count = binomial(m, r);
    if count > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            count,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

/// Exhaustive max of `norm(Σ_{k∈J} pieces[k])` over all r-subsets `J`.
fn exhaustive(
    pieces: &[Matrix],
    r: usize,
    norm_kind: NormKind,
    tol: &Tolerance,
    keep_table: bool,
) -> Result<ErasureReport> {
    let m = pieces.len();
    check_r(r, m)?;
    let n = pieces[0].rows();
    let mut values = Vec::new();
    for subset in Combinations::new(m, r) {
        let sum = subset.iter().fold(Matrix::zeros(n, n), |acc, &k| &acc + &pieces[k]);
        values.push(SubsetValue {
            value: norm_kind.eval(&sum, tol),
            subset,
        });
    }
    let worst_value = values.iter().map(|s| s.value).fold(0.0, f64::max);
    let floor = worst_value - TIE_RELATIVE * worst_value;
    let argmax_subsets = values
        .iter()
        .filter(|s| s.value >= floor)
        .map(|s| s.subset.clone())
        .collect();
    Ok(ErasureReport {
        r,
        total: m,
        norm_kind,
        worst_value,
        argmax_subsets,
        subsets_evaluated: values.len() as u128,
        per_subset_values: keep_table.then_some(values),
    })
}

fn check_mask(total: usize, mask: &ErasureMask) -> Result<()> {
    if mask.total() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: mask.total(),
        });
    }
    Ok(())
}

/// `Σ_{i∈J} ωᵢ νᵢ π_{Vᵢ} S_W⁻¹ π_{Wᵢ}`
pub fn fusion_error_operator(pair: &DualPair, mask: &ErasureMask, tol: &Tolerance) -> Result<Matrix> {
    pair.require_dual(tol)?;
    check_mask(pair.len(), mask)?;
    let n = pair.ambient_dim();
    Ok(mask
        .erased()
        .iter()
        .fold(Matrix::zeros(n, n), |acc, &i| &acc + pair.component(i)))
}

/// Norm of the error operator for one known erasure set.
pub fn fusion_partial_erasure_error(
    pair: &DualPair,
    mask: &ErasureMask,
    norm_kind: NormKind,
    tol: &Tolerance,
) -> Result<f64> {
    Ok(norm_kind.eval(&fusion_error_operator(pair, mask, tol)?, tol))
}

pub fn worst_case_error(pair: &DualPair, r: usize, norm_kind: NormKind, tol: &Tolerance) -> Result<ErasureReport> {
    pair.require_dual(tol)?;
    exhaustive(pair.components(), r, norm_kind, tol, false)
}

/// As [`worst_case_error`], keeping the value of every subset.
pub fn worst_case_error_table(
    pair: &DualPair,
    r: usize,
    norm_kind: NormKind,
    tol: &Tolerance,
) -> Result<ErasureReport> {
    pair.require_dual(tol)?;
    exhaustive(pair.components(), r, norm_kind, tol, true)
}

fn require_discrete_dual(f: &DiscreteFrame, g: &DiscreteFrame, tol: &Tolerance) -> Result<()> {
    let (ok, residual) = verify_discrete_dual(f, g, tol)?;
    if ok {
        Ok(())
    } else {
        Err(Error::NotDual { residual })
    }
}

/// `Σ_{k∈Λ} gₖ fₖᵀ`
pub fn discrete_error_operator(
    f: &DiscreteFrame,
    g: &DiscreteFrame,
    mask: &ErasureMask,
    tol: &Tolerance,
) -> Result<Matrix> {
    require_discrete_dual(f, g, tol)?;
    check_mask(f.len(), mask)?;
    Ok(g.cross_operator(f, Some(mask.erased())))
}

fn rank_one_pieces(f: &DiscreteFrame, g: &DiscreteFrame) -> Vec<Matrix> {
    (0..f.len()).map(|k| Matrix::outer(g.vector(k), f.vector(k))).collect()
}

pub fn discrete_worst_case(
    f: &DiscreteFrame,
    g: &DiscreteFrame,
    r: usize,
    norm_kind: NormKind,
    tol: &Tolerance,
) -> Result<ErasureReport> {
    require_discrete_dual(f, g, tol)?;
    exhaustive(&rank_one_pieces(f, g), r, norm_kind, tol, false)
}

pub fn discrete_worst_case_table(
    f: &DiscreteFrame,
    g: &DiscreteFrame,
    r: usize,
    norm_kind: NormKind,
    tol: &Tolerance,
) -> Result<ErasureReport> {
    require_discrete_dual(f, g, tol)?;
    exhaustive(&rank_one_pieces(f, g), r, norm_kind, tol, true)
}

/// Norm of `Σ_{k∈J} gₖ fₖᵀ` for one known erasure set.
pub fn partial_erasure_error(
    f: &DiscreteFrame,
    g: &DiscreteFrame,
    mask: &ErasureMask,
    norm_kind: NormKind,
    tol: &Tolerance,
) -> Result<f64> {
    Ok(norm_kind.eval(&discrete_error_operator(f, g, mask, tol)?, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::{bridge_dual_to_discrete, bridge_fusion_to_discrete, standard_basis, BridgeMode};
    use crate::fusion::FusionFrame;
    use crate::linalg::Subspace;

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
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(40, 20), 137_846_528_820);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(7, 0), 1);
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(6, 3).count(), 20);
    }

    #[test]
    fn mask_validation() {
        assert!(matches!(
            ErasureMask::new(3, [0, 3]),
            Err(Error::IndexOutOfRange { index: 3, total: 3 })
        ));
        let m = ErasureMask::new(4, [2, 0, 2]).unwrap();
        assert_eq!(m.erased(), &[0, 2]);
        assert_eq!(m.diagonal(), vec![1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn empty_and_full_masks() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let z = fusion_error_operator(&pair, &ErasureMask::empty(3), &tol()).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        let full = fusion_error_operator(&pair, &ErasureMask::all(3), &tol()).unwrap();
        assert!(full.max_abs_diff(&Matrix::identity(4)) < 1e-12);
        assert!((full.frobenius_norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn first_member_error_operator() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let e = fusion_error_operator(&pair, &ErasureMask::new(3, [0]).unwrap(), &tol()).unwrap();
        assert!(e.max_abs_diff(&Matrix::diag(&[1.0, 0.5, 0.0, 0.0])) < 1e-12);
    }

    #[test]
    fn single_erasure_worst_case() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let rep = worst_case_error(&pair, 1, NormKind::Frobenius, &tol()).unwrap();
        assert!((rep.worst_value - 1.25f64.sqrt()).abs() < 1e-12);
        assert_eq!(rep.argmax_subsets, vec![vec![0], vec![1]]);
        assert_eq!(rep.subsets_evaluated, 3);
    }

    #[test]
    fn r_out_of_range() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        for r in [0, 3, 4] {
            assert!(matches!(
                worst_case_error(&pair, r, NormKind::Frobenius, &tol()),
                Err(Error::ErasureCountOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn table_matches_max() {
        let pair = DualPair::canonical(nonriesz_r4(), &tol()).unwrap();
        let rep = worst_case_error_table(&pair, 2, NormKind::Operator, &tol()).unwrap();
        let table = rep.per_subset_values.unwrap();
        assert_eq!(table.len(), 3);
        let m = table.iter().map(|s| s.value).fold(0.0, f64::max);
        assert_eq!(m, rep.worst_value);
    }

    #[test]
    fn orthonormal_basis_self_dual() {
        let f = DiscreteFrame::new(3, standard_basis(3)).unwrap();
        let rep = discrete_worst_case(&f, &f, 1, NormKind::Operator, &tol()).unwrap();
        assert!((rep.worst_value - 1.0).abs() < 1e-12);
        assert_eq!(rep.argmax_subsets.len(), 3);
    }

    #[test]
    fn discrete_requires_dual() {
        let f = DiscreteFrame::new(2, standard_basis(2)).unwrap();
        let g = DiscreteFrame::from_rows(2, &[&[2.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            discrete_worst_case(&f, &g, 1, NormKind::Operator, &tol()),
            Err(Error::NotDual { .. })
        ));
    }

    #[test]
    fn bridged_block_matches_fusion_component() {
        let w = nonriesz_r4();
        let pair = DualPair::canonical(w.clone(), &tol()).unwrap();
        let basis = standard_basis(4);
        let f = bridge_fusion_to_discrete(&w, &basis, BridgeMode::CanonicalWeighted, &tol()).unwrap();
        let g = bridge_dual_to_discrete(pair.dual(), &basis, &tol()).unwrap();
        for i in 0..3 {
            let mask = ErasureMask::new(f.len(), f.block(i)).unwrap();
            let d = discrete_error_operator(&f, &g, &mask, &tol()).unwrap();
            assert!(d.max_abs_diff(pair.component(i)) < 1e-12);
        }
        let third = ErasureMask::new(f.len(), f.block(2)).unwrap();
        let v = partial_erasure_error(&f, &g, &third, NormKind::Frobenius, &tol()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_vector_erasure_is_zero() {
        let w = nonriesz_r4();
        let basis = standard_basis(4);
        let f = bridge_fusion_to_discrete(&w, &basis, BridgeMode::CanonicalWeighted, &tol()).unwrap();
        let g = bridge_dual_to_discrete(&w.canonical_dual(&tol()).unwrap(), &basis, &tol()).unwrap();
        let zero = (0..f.len()).find(|&k| f.vector(k).norm() == 0.0).unwrap();
        let e = discrete_error_operator(&f, &g, &ErasureMask::new(f.len(), [zero]).unwrap(), &tol()).unwrap();
        assert_eq!(e.max_abs(), 0.0);
    }

    #[test]
    fn norm_kind_parsing() {
        assert_eq!("Frobenius".parse::<NormKind>().unwrap(), NormKind::Frobenius);
        assert_eq!("operator".parse::<NormKind>().unwrap(), NormKind::Operator);
        assert!("nuclear".parse::<NormKind>().is_err());
    }
}
