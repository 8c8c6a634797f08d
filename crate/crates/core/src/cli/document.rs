//! Frame specification documents: UTF-8 JSON with numbers given either as
//! JSON numbers or as strings such as `"5/7"`, `"-0.25"` or `"1e-3"`.
//!
//! ```json
//! {
//!   "name": "two hyperplanes",
//!   "ambient_dim": 3,
//!   "field": "real",
//!   "subspaces": [
//!     { "weight": 1, "spanning_vectors": [[0, 1, 0], [0, 0, 1]] },
//!     { "spanning_vectors": [[1, 0, 0], [0, 0, 1]] }
//!   ],
//!   "dual": [ { "spanning_vectors": [["1", "2", "-1/2"], [0, 1, 0]] }, ... ],
//!   "basis": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
//!   "left_inverse": [ [[0, 0, 1], [0, 1, 2], [0, 0, "-1/2"]], ... ],
//!   "tolerance": { "rank_eps": 1e-10, "residual_eps": 1e-10 }
//! }
//! ```
//!
//! Weights default to 1 for the frame and to the matching frame weight for
//! the dual.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::fusion::FusionFrame;
use crate::linalg::{Matrix, Subspace, Tolerance, Vector};

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    fn value(&self, path: &str) -> Result<f64, DocumentError> {
        let v = match self {
            Scalar::Number(x) => *x,
            Scalar::Text(s) => {
                parse_scalar(s).ok_or_else(|| DocumentError::at(path, format!("cannot read `{s}` as a number")))?
            }
        };
        if !v.is_finite() {
            return Err(DocumentError::at(path, "value is not finite"));
        }
        Ok(v)
    }
}

/// `p/q`, or anything `f64::from_str` accepts.
pub fn parse_scalar(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            (q != 0.0).then(|| p / q)
        }
        None => s.parse().ok(),
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawMember {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Scalar>,
    pub spanning_vectors: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawTolerance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_eps: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_eps: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub ambient_dim: usize,
    #[serde(default, alias = "field_tag", skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub subspaces: Vec<RawMember>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<Vec<RawMember>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<Scalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_inverse: Option<Vec<Vec<Vec<Scalar>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<RawTolerance>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DocumentError {
    pub path: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl DocumentError {
    fn at(path: &str, message: impl Into<String>) -> Self {
        DocumentError {
            path: path.to_string(),
            line: None,
            column: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            _ if self.path.is_empty() => f.write_str(&self.message),
            _ => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

impl std::error::Error for DocumentError {}

/// A parsed and validated document.
#[derive(Clone, Debug)]
pub struct FrameDocument {
    pub raw: RawDocument,
    pub frame: FusionFrame,
    pub dual: Option<FusionFrame>,
    pub basis: Option<Vec<Vector>>,
    pub left_inverse: Option<Vec<Matrix>>,
    pub tolerance: Option<Tolerance>,
    /// Hex SHA-256 of the input bytes.
    pub digest: String,
}

fn vector(path: &str, row: &[Scalar], n: usize) -> Result<Vector, DocumentError> {
    if row.len() != n {
        return Err(DocumentError::at(
            path,
            format!("expected {n} entries, found {}", row.len()),
        ));
    }
    let vals = row
        .iter()
        .enumerate()
        .map(|(k, s)| s.value(&format!("{path}[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Vector::new(vals).map_err(|e| DocumentError::at(path, e.to_string()))
}

fn members(
    path: &str,
    raw: &[RawMember],
    n: usize,
    default_weights: Option<&[f64]>,
    tol: &Tolerance,
) -> Result<FusionFrame, DocumentError> {
    if raw.is_empty() {
        return Err(DocumentError::at(path, "subspace list is empty"));
    }
    let mut subspaces = Vec::new();
    let mut weights = Vec::new();
    for (i, m) in raw.iter().enumerate() {
        let mp = format!("{path}[{i}]");
        let vs = m
            .spanning_vectors
            .iter()
            .enumerate()
            .map(|(k, row)| vector(&format!("{mp}.spanning_vectors[{k}]"), row, n))
            .collect::<Result<Vec<_>, _>>()?;
        let s = Subspace::span(n, &vs, tol).map_err(|e| DocumentError::at(&mp, e.to_string()))?;
        subspaces.push(s);
        let w = match &m.weight {
            Some(w) => w.value(&format!("{mp}.weight"))?,
            None => default_weights.map_or(1.0, |d| d[i]),
        };
        if w <= 0.0 {
            return Err(DocumentError::at(&format!("{mp}.weight"), "weight must be positive"));
        }
        weights.push(w);
    }
    FusionFrame::weighted(n, subspaces, Some(weights)).map_err(|e| DocumentError::at(path, e.to_string()))
}

impl FrameDocument {
    pub fn from_path(path: &Path) -> Result<Self, DocumentError> {
        let bytes =
            std::fs::read(path).map_err(|e| DocumentError::at("", format!("cannot read {}: {e}", path.display())))?;
        FrameDocument::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DocumentError> {
        let digest = hex::encode(Sha256::digest(bytes));
        let text = std::str::from_utf8(bytes).map_err(|e| DocumentError::at("", format!("input is not UTF-8: {e}")))?;
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| DocumentError {
            path: String::new(),
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        })?;
        FrameDocument::from_raw(raw, digest)
    }

    pub fn from_raw(raw: RawDocument, digest: String) -> Result<Self, DocumentError> {
        let n = raw.ambient_dim;
        if n == 0 {
            return Err(DocumentError::at("ambient_dim", "must be positive"));
        }
        if let Some(f) = &raw.field {
            if f != "real" {
                return Err(DocumentError::at(
                    "field",
                    format!("only \"real\" is supported, found \"{f}\""),
                ));
            }
        }
        let tolerance = match &raw.tolerance {
            Some(t) => {
                let d = Tolerance::default();
                let rank = t.rank_eps.as_ref().map(|s| s.value("tolerance.rank_eps")).transpose()?;
                let res = t
                    .residual_eps
                    .as_ref()
                    .map(|s| s.value("tolerance.residual_eps"))
                    .transpose()?;
                Some(
                    Tolerance::new(rank.unwrap_or(d.rank_eps), res.unwrap_or(d.residual_eps))
                        .map_err(|e| DocumentError::at("tolerance", e.to_string()))?,
                )
            }
            None => None,
        };
        let tol = tolerance.unwrap_or_default();
        let frame = members("subspaces", &raw.subspaces, n, None, &tol)?;
        let dual = match &raw.dual {
            Some(d) => {
                if d.len() != frame.len() {
                    return Err(DocumentError::at(
                        "dual",
                        format!("has {} members, the frame has {}", d.len(), frame.len()),
                    ));
                }
                Some(members("dual", d, n, Some(&frame.weights()), &tol)?)
            }
            None => None,
        };
        let basis = match &raw.basis {
            Some(rows) => {
                if rows.len() != n {
                    return Err(DocumentError::at(
                        "basis",
                        format!("expected {n} vectors, found {}", rows.len()),
                    ));
                }
                Some(
                    rows.iter()
                        .enumerate()
                        .map(|(k, r)| vector(&format!("basis[{k}]"), r, n))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            None => None,
        };
        let left_inverse = match &raw.left_inverse {
            Some(blocks) => {
                if blocks.len() != frame.len() {
                    return Err(DocumentError::at(
                        "left_inverse",
                        format!("has {} blocks, the frame has {} members", blocks.len(), frame.len()),
                    ));
                }
                let mut out = Vec::new();
                for (b, block) in blocks.iter().enumerate() {
                    let rows = block
                        .iter()
                        .enumerate()
                        .map(|(k, r)| Ok(vector(&format!("left_inverse[{b}][{k}]"), r, n)?.into_vec()))
                        .collect::<Result<Vec<_>, DocumentError>>()?;
                    if rows.len() != n {
                        return Err(DocumentError::at(
                            &format!("left_inverse[{b}]"),
                            format!("expected {n} rows, found {}", rows.len()),
                        ));
                    }
                    out.push(
                        Matrix::from_rows(&rows)
                            .map_err(|e| DocumentError::at(&format!("left_inverse[{b}]"), e.to_string()))?,
                    );
                }
                Some(out)
            }
            None => None,
        };
        Ok(FrameDocument {
            raw,
            frame,
            dual,
            basis,
            left_inverse,
            tolerance,
            digest,
        })
    }

    /// The document with every number written as a JSON number.
    pub fn normalized(&self) -> RawDocument {
        fn num(s: &Scalar) -> Scalar {
            match s {
                Scalar::Number(x) => Scalar::Number(*x),
                Scalar::Text(t) => Scalar::Number(parse_scalar(t).unwrap_or(f64::NAN)),
            }
        }
        fn rows(r: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
            r.iter().map(|row| row.iter().map(num).collect()).collect()
        }
        fn mems(ms: &[RawMember]) -> Vec<RawMember> {
            ms.iter()
                .map(|m| RawMember {
                    weight: m.weight.as_ref().map(num),
                    spanning_vectors: rows(&m.spanning_vectors),
                })
                .collect()
        }
        let r = &self.raw;
        RawDocument {
            name: r.name.clone(),
            description: r.description.clone(),
            ambient_dim: r.ambient_dim,
            field: Some("real".into()),
            subspaces: mems(&r.subspaces),
            dual: r.dual.as_deref().map(mems),
            basis: r.basis.as_deref().map(rows),
            left_inverse: r.left_inverse.as_ref().map(|bs| bs.iter().map(|b| rows(b)).collect()),
            tolerance: r.tolerance.as_ref().map(|t| RawTolerance {
                rank_eps: t.rank_eps.as_ref().map(num),
                residual_eps: t.residual_eps.as_ref().map(num),
            }),
        }
    }
}
