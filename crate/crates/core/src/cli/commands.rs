use std::fmt;

use serde_json::{json, Value};

use super::document::{DocumentError, FrameDocument};
use super::report::{fmt_num, fmt_set, fmt_vec, matrix_json, one_based, vectors_json, AnalysisReport, InputInfo, Text};
use super::{BridgeArg, Cli, Command, What, Which};
use crate::discrete::{
    bridge_dual_to_discrete, bridge_fusion_to_discrete, halving_dual, standard_basis, verify_discrete_dual, BridgeMode,
    DiscreteFrame,
};
use crate::duality::{component_preserving_check, lift_to_component_preserving, verify_dual, DualPair, LeftInverseMap};
use crate::erasures::{
    binomial, discrete_worst_case, discrete_worst_case_table, fusion_error_operator, partial_erasure_error,
    worst_case_error, worst_case_error_table, ErasureMask, ErasureReport, NormKind,
};
use crate::error::Error;
use crate::fusion::FusionFrame;
use crate::linalg::{Matrix, Subspace, Tolerance, Vector};
use crate::optimality::{
    certify_canonical_optimal, certify_dual_optimal, certify_tight_uniform, expand_optimal_family,
    parseval_optimal_family, probe_refutation, Certificate, ExpansionKind, ProbeOutcome,
};

/// Tables are included by default up to this many subsets.
const DEFAULT_TABLE_LIMIT: u128 = 1000;

#[derive(Debug)]
pub enum CliError {
    Document(DocumentError),
    Analysis(Error),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Document(e) => write!(f, "{e}"),
            CliError::Analysis(e) => write!(f, "{e}"),
            CliError::Usage(s) => f.write_str(s),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Analysis(e)
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Document(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Outcome {
    result: Value,
    text: String,
}

pub fn run_command(cli: &Cli) -> CliResult<AnalysisReport> {
    let (file, name) = match &cli.command {
        Command::Classify { file } => (file, "classify"),
        Command::VerifyDual { file } => (file, "verify-dual"),
        Command::Erasure { file, .. } => (file, "erasure"),
        Command::Certify { file, .. } => (file, "certify"),
        Command::Construct { file, .. } => (file, "construct"),
    };
    let doc = FrameDocument::from_path(file)?;
    let tol = match cli.tol {
        Some(eps) => Tolerance::uniform(eps).map_err(|e| CliError::Usage(format!("--tol: {e}")))?,
        None => doc.tolerance.unwrap_or_default(),
    };
    let out = match &cli.command {
        Command::Classify { .. } => classify(&doc, &tol)?,
        Command::VerifyDual { .. } => verify(&doc, &tol)?,
        Command::Erasure {
            r,
            norm,
            fixed,
            bridged,
            canonical,
            table,
            ..
        } => {
            let opts = ErasureOpts {
                r: *r,
                norm: (*norm).into(),
                fixed: fixed.clone(),
                canonical: *canonical,
                table: *table,
            };
            if *bridged {
                erasure_bridged(&doc, &opts, &tol)?
            } else {
                erasure_fusion(&doc, &opts, &tol)?
            }
        }
        Command::Certify { which, probe, seed, .. } => certify(&doc, *which, *probe, *seed, &tol)?,
        Command::Construct {
            what,
            index,
            bridge_mode,
            canonical,
            ..
        } => match what {
            What::ParsevalFamily => construct_parseval(&doc, &tol)?,
            What::Expand => construct_expand(&doc, *index, *canonical, &tol)?,
            What::Bridge => construct_bridge(&doc, *bridge_mode, &tol)?,
        },
    };
    Ok(AnalysisReport {
        tool: "fusion-dual",
        version: env!("CARGO_PKG_VERSION"),
        command: name.to_string(),
        input: InputInfo {
            path: file.display().to_string(),
            sha256: doc.digest.clone(),
        },
        tolerance: tol,
        index_base: 1,
        result: out.result,
        document: doc.normalized(),
        text: out.text,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn member_labels(f: &DiscreteFrame, idx: &[usize]) -> Vec<String> {
    match f.labels() {
        Some(l) => idx
            .iter()
            .map(|&k| format!("{} (i={}, j={})", k + 1, l[k].0 + 1, l[k].1 + 1))
            .collect(),
        None => idx.iter().map(|&k| format!("{}", k + 1)).collect(),
    }
}

fn labels_json(f: &DiscreteFrame, idx: &[usize]) -> Value {
    match f.labels() {
        Some(l) => Value::Array(idx.iter().map(|&k| json!([l[k].0 + 1, l[k].1 + 1])).collect()),
        None => Value::Null,
    }
}

fn classify(doc: &FrameDocument, tol: &Tolerance) -> CliResult<Outcome> {
    let w = &doc.frame;
    let class = w.classify(tol);
    let s = w.frame_operator();
    let (ra, rb) = w.riesz_constants();
    let mut result = json!({
        "label": class.label(),
        "classification": class,
        "frame_bounds": [class.lower_bound, class.upper_bound],
        "members": w.len(),
        "member_dims": w.dims(),
        "weights": w.weights(),
        "riesz_constants": [ra, rb],
        "frame_operator": matrix_json(&s),
    });
    let mut t = Text::default();
    t.heading("classification");
    t.field("verdict", class.label());
    t.field("frame", yes_no(class.is_frame));
    t.field(
        "frame bounds",
        format!("({}, {})", fmt_num(class.lower_bound), fmt_num(class.upper_bound)),
    );
    t.field("tight", yes_no(class.is_tight));
    t.field("Parseval", yes_no(class.is_parseval));
    t.field("Riesz fusion basis", yes_no(class.is_riesz_fusion_basis));
    t.field("orthonormal fusion basis", yes_no(class.is_orthonormal_fusion_basis));
    t.field("non-trivial", yes_no(class.is_non_trivial));
    t.field("member dims", format!("{:?}", w.dims()));
    t.field("weights", fmt_vec(&w.weights()));
    t.matrix("frame operator S", &s);
    if class.is_frame {
        let s_inv = w.frame_operator_inverse(tol)?;
        t.matrix("S^-1", &s_inv);
        result["frame_operator_inverse"] = matrix_json(&s_inv);
    } else {
        t.line("S is singular: the family does not span");
    }
    if let Some(v) = &doc.dual {
        let dc = v.classify(tol);
        t.heading("dual family");
        t.field("verdict", dc.label());
        t.field(
            "bounds",
            format!("({}, {})", fmt_num(dc.lower_bound), fmt_num(dc.upper_bound)),
        );
        result["dual"] = json!({ "label": dc.label(), "classification": dc });
    }
    Ok(Outcome {
        result,
        text: t.finish(),
    })
}

fn require_dual_section(doc: &FrameDocument) -> CliResult<&FusionFrame> {
    doc.dual.as_ref().ok_or_else(|| {
        CliError::Document(DocumentError {
            path: "dual".into(),
            line: None,
            column: None,
            message: "the document has no `dual` section".into(),
        })
    })
}

fn verify(doc: &FrameDocument, tol: &Tolerance) -> CliResult<Outcome> {
    let v = require_dual_section(doc)?;
    let pair = DualPair::new(doc.frame.clone(), v.clone(), tol)?;
    let check = verify_dual(&pair, tol);
    let n = pair.ambient_dim();
    let deviation = &check.reconstruction - &Matrix::identity(n);
    let mut result = json!({
        "passes": check.passes,
        "residual": check.residual,
        "reconstruction": matrix_json(&check.reconstruction),
        "deviation_from_identity": matrix_json(&deviation),
        "dual_is_frame": pair.dual_is_frame(tol),
    });
    let mut t = Text::default();
    t.heading("dual verification");
    t.field("verdict", if check.passes { "dual" } else { "not a dual" });
    t.field("residual (Frobenius)", fmt_num(check.residual));
    t.field("dual family spans", yes_no(pair.dual_is_frame(tol)));
    t.matrix("sum of w_i v_i P_Vi S^-1 P_Wi", &check.reconstruction);
    if let Some(blocks) = &doc.left_inverse {
        let map = LeftInverseMap { blocks: blocks.clone() };
        let li_res = map.left_inverse_residual(&doc.frame);
        let is_li = li_res <= tol.residual_eps;
        let preserving = if is_li {
            Some(component_preserving_check(&doc.frame, v, &map, tol)?)
        } else {
            None
        };
        t.heading("left inverse");
        t.field("left-inverse residual", fmt_num(li_res));
        t.field("is left inverse", yes_no(is_li));
        if let Some(p) = preserving {
            t.field("component preserving", yes_no(p));
        }
        result["left_inverse"] = json!({
            "residual": li_res,
            "is_left_inverse": is_li,
            "component_preserving": preserving,
        });
    }
    if check.passes {
        let lift = lift_to_component_preserving(&pair, tol)?;
        let bases: Vec<Value> = lift
            .members()
            .iter()
            .map(|m| vectors_json(&m.subspace.canonical_basis(tol).basis_vectors()))
            .collect();
        t.heading("component-preserving lift");
        for (i, m) in lift.members().iter().enumerate() {
            let vs: Vec<String> = m
                .subspace
                .canonical_basis(tol)
                .basis_vectors()
                .iter()
                .map(|b| fmt_vec(b.as_slice()))
                .collect();
            t.field(&format!("X_{}", i + 1), format!("span{{{}}}", vs.join(", ")));
        }
        result["lift"] = json!({ "member_bases": bases, "weights": lift.weights() });
    }
    Ok(Outcome {
        result,
        text: t.finish(),
    })
}

struct ErasureOpts {
    r: Option<usize>,
    norm: NormKind,
    fixed: Option<Vec<usize>>,
    canonical: bool,
    table: bool,
}

impl ErasureOpts {
    /// `(r for the worst case, fixed set 0-based)`
    fn resolve(&self, m: usize) -> CliResult<(Option<usize>, Option<Vec<usize>>)> {
        let fixed = match &self.fixed {
            Some(j) => {
                if let Some(&bad) = j.iter().find(|&&k| k == 0 || k > m) {
                    return Err(CliError::Analysis(Error::IndexOutOfRange { index: bad, total: m }));
                }
                let mut z: Vec<usize> = j.iter().map(|k| k - 1).collect();
                z.sort_unstable();
                z.dedup();
                Some(z)
            }
            None => None,
        };
        match (self.r, &fixed) {
            (None, None) => Err(CliError::Usage("erasure needs --r or --fixed".into())),
            (Some(r), Some(j)) if r != j.len() => Err(CliError::Usage(format!(
                "--r {r} disagrees with the {} indices given to --fixed",
                j.len()
            ))),
            (Some(r), _) => Ok((Some(r), fixed)),
            (None, Some(j)) => {
                let r = j.len();
                Ok(((r >= 1 && r < m).then_some(r), fixed))
            }
        }
    }

    fn with_table(&self, m: usize, r: usize) -> bool {
        self.table || binomial(m, r) <= DEFAULT_TABLE_LIMIT
    }
}

fn report_json(rep: &ErasureReport) -> Value {
    let mut v = json!({
        "r": rep.r,
        "norm": rep.norm_kind,
        "worst_value": rep.worst_value,
        "argmax_subsets": rep.argmax_subsets.iter().map(|s| one_based(s)).collect::<Vec<_>>(),
        "subsets_evaluated": rep.subsets_evaluated as u64,
    });
    if let Some(table) = &rep.per_subset_values {
        v["table"] = Value::Array(
            table
                .iter()
                .map(|s| json!({ "subset": one_based(&s.subset), "value": s.value }))
                .collect(),
        );
    }
    v
}

fn report_text(t: &mut Text, rep: &ErasureReport) {
    t.field("r", rep.r.to_string());
    t.field("norm", rep.norm_kind.to_string());
    t.field("worst value", fmt_num(rep.worst_value));
    let sets: Vec<String> = rep.argmax_subsets.iter().map(|s| fmt_set(&one_based(s))).collect();
    t.field("attained at", sets.join(" "));
    t.field("subsets evaluated", rep.subsets_evaluated.to_string());
    if let Some(table) = &rep.per_subset_values {
        t.line("subset values:");
        for s in table {
            t.line(format!("  {:<16} {}", fmt_set(&one_based(&s.subset)), fmt_num(s.value)));
        }
    }
}

fn pick_dual(doc: &FrameDocument, canonical: bool, tol: &Tolerance) -> CliResult<(FusionFrame, &'static str)> {
    match (&doc.dual, canonical) {
        (Some(v), false) => Ok((v.clone(), "document")),
        _ => Ok((doc.frame.canonical_dual(tol)?, "canonical")),
    }
}

fn erasure_fusion(doc: &FrameDocument, opts: &ErasureOpts, tol: &Tolerance) -> CliResult<Outcome> {
    let (v, source) = pick_dual(doc, opts.canonical, tol)?;
    let pair = DualPair::new(doc.frame.clone(), v, tol)?;
    let m = pair.len();
    let (r, fixed) = opts.resolve(m)?;
    let mut result = json!({ "mode": "fusion", "dual_source": source, "members": m, "norm": opts.norm });
    let mut t = Text::default();
    t.heading("erasures (fusion)");
    t.field("dual", source);
    t.field("members", m.to_string());
    if let Some(r) = r {
        let rep = if opts.with_table(m, r) {
            worst_case_error_table(&pair, r, opts.norm, tol)?
        } else {
            worst_case_error(&pair, r, opts.norm, tol)?
        };
        t.heading("worst case");
        report_text(&mut t, &rep);
        result["worst_case"] = report_json(&rep);
    }
    if let Some(j) = fixed {
        let mask = ErasureMask::new(m, j.iter().copied())?;
        let op = fusion_error_operator(&pair, &mask, tol)?;
        let value = opts.norm.eval(&op, tol);
        t.heading("fixed erasure set");
        t.field("set", fmt_set(&one_based(&j)));
        t.field(&format!("{} norm", opts.norm), fmt_num(value));
        t.matrix("error operator", &op);
        result["fixed"] = json!({
            "subset": one_based(&j),
            "norm": opts.norm,
            "value": value,
            "operator": matrix_json(&op),
        });
    }
    Ok(Outcome {
        result,
        text: t.finish(),
    })
}

fn doc_basis(doc: &FrameDocument) -> Vec<Vector> {
    doc.basis
        .clone()
        .unwrap_or_else(|| standard_basis(doc.frame.ambient_dim()))
}

fn erasure_bridged(doc: &FrameDocument, opts: &ErasureOpts, tol: &Tolerance) -> CliResult<Outcome> {
    let basis = doc_basis(doc);
    let raw = bridge_fusion_to_discrete(&doc.frame, &basis, BridgeMode::CanonicalWeighted, tol)?;
    let (f, kept) = raw.compact_nonzero(tol);
    let canon = f.canonical_dual(tol)?;
    let doc_dual = match (&doc.dual, opts.canonical) {
        (Some(v), false) => Some(bridge_dual_to_discrete(v, &basis, tol)?.select(&kept)),
        _ => None,
    };
    let (g, source) = match &doc_dual {
        Some(g) => (g, "document"),
        None => (&canon, "canonical"),
    };
    let m = f.len();
    let (r, fixed) = opts.resolve(m)?;
    let mut result = json!({
        "mode": "bridged",
        "dual_source": source,
        "vectors": m,
        "norm": opts.norm,
        "labels": labels_json(&f, &(0..m).collect::<Vec<_>>()),
    });
    let mut t = Text::default();
    t.heading("erasures (bridged vector frame)");
    t.field("dual", source);
    t.field("vectors", format!("{m} (zero vectors removed)"));
    if let Some(r) = r {
        let rep = if opts.with_table(m, r) {
            discrete_worst_case_table(&f, g, r, opts.norm, tol)?
        } else {
            discrete_worst_case(&f, g, r, opts.norm, tol)?
        };
        t.heading("worst case");
        report_text(&mut t, &rep);
        result["worst_case"] = report_json(&rep);
    }
    if let Some(j) = fixed {
        let mask = ErasureMask::new(m, j.iter().copied())?;
        let canon_value = partial_erasure_error(&f, &canon, &mask, opts.norm, tol)?;
        t.heading("fixed erasure set");
        t.field("set", fmt_set(&one_based(&j)));
        t.field("canonical dual", fmt_num(canon_value));
        let mut fixed_json = json!({
            "subset": one_based(&j),
            "norm": opts.norm,
            "canonical": canon_value,
        });
        if let Some(gd) = &doc_dual {
            let v = partial_erasure_error(&f, gd, &mask, opts.norm, tol)?;
            t.field("document dual", fmt_num(v));
            fixed_json["document"] = json!(v);
        }
        match halving_dual(&f, &j, tol) {
            Ok(h) => {
                let v = partial_erasure_error(&f, &h, &mask, opts.norm, tol)?;
                let ratio = canon_value / v;
                t.field("halved dual", fmt_num(v));
                t.field("canonical / halved", fmt_num(ratio));
                t.vectors(
                    "halved dual vectors",
                    &member_labels(&f, &(0..m).collect::<Vec<_>>()),
                    h.vectors(),
                );
                fixed_json["halved"] = json!({
                    "feasible": true,
                    "value": v,
                    "ratio": ratio,
                    "vectors": vectors_json(h.vectors()),
                });
            }
            Err(Error::Infeasible(reason)) => {
                t.field("halved dual", format!("infeasible: {reason}"));
                fixed_json["halved"] = json!({ "feasible": false, "reason": reason });
            }
            Err(e) => return Err(e.into()),
        }
        result["fixed"] = fixed_json;
    }
    Ok(Outcome {
        result,
        text: t.finish(),
    })
}

fn certificate_json(c: &Certificate) -> Value {
    let mut v = serde_json::to_value(c).expect("certificate serializes");
    v["lambda1"] = json!(one_based(&c.lambda1));
    v["lambda2"] = json!(one_based(&c.lambda2));
    v
}

fn certificate_text(t: &mut Text, c: &Certificate) {
    t.field(
        "verdict",
        if c.is_certified() {
            "certified optimal"
        } else {
            "not applicable"
        },
    );
    t.field("c", fmt_num(c.c_value));
    t.field("Lambda_1", fmt_set(&one_based(&c.lambda1)));
    t.field("Lambda_2", fmt_set(&one_based(&c.lambda2)));
    t.field("dim H_1 / dim H_2", format!("{} / {}", c.h1_dim, c.h2_dim));
    t.field("dim H_1 cap H_2", c.intersection_dim.to_string());
    t.field(
        "Riesz hypothesis",
        format!("{:?} side: {}", c.riesz_side, yes_no(c.lambda_side_riesz)).to_lowercase(),
    );
    t.field("non-trivial frame", yes_no(c.non_trivial));
    if let Some(d) = c.d1_value {
        t.field("d_1 (Frobenius)", fmt_num(d));
    }
    if let Some(b) = c.d1_bound {
        t.field("bound c / alpha", fmt_num(b));
    }
    for n in &c.notes {
        t.line(format!("note: {n}"));
    }
}

fn probe_json(p: &ProbeOutcome) -> Value {
    serde_json::to_value(p).expect("probe serializes")
}

fn certify(doc: &FrameDocument, which: Which, probe: Option<usize>, seed: u64, tol: &Tolerance) -> CliResult<Outcome> {
    let w = &doc.frame;
    let (cert, pair) = match which {
        Which::Canonical => {
            let c = certify_canonical_optimal(w, tol)?;
            (c, Some(DualPair::canonical(w.clone(), tol)?))
        }
        Which::Dual => {
            let v = require_dual_section(doc)?;
            let pair = DualPair::new(w.clone(), v.clone(), tol)?;
            (certify_dual_optimal(&pair, tol)?, Some(pair))
        }
        Which::Tight => {
            let v = match &doc.dual {
                Some(v) => v.clone(),
                None => w.canonical_dual(tol).unwrap_or_else(|_| w.clone()),
            };
            let c = certify_tight_uniform(w, &v, tol);
            let pair = DualPair::new(w.clone(), v, tol).ok().filter(|p| p.is_dual(tol));
            (c, pair)
        }
    };
    let mut result = json!({ "certificate": certificate_json(&cert) });
    let mut t = Text::default();
    t.heading(&format!("certificate ({})", format!("{which:?}").to_lowercase()));
    certificate_text(&mut t, &cert);
    if let Some(samples) = probe {
        match &pair {
            Some(p) => {
                let out = probe_refutation(p, samples, seed, tol)?;
                t.heading("probe");
                t.field("verdict", format!("{:?}", out.verdict).to_lowercase());
                t.field("baseline d_1", fmt_num(out.baseline));
                t.field("best probe d_1", fmt_num(out.best_value));
                t.field("probes evaluated", out.probes_evaluated.to_string());
                t.field("probes rejected", out.probes_rejected.to_string());
                result["probe"] = probe_json(&out);
            }
            None => {
                t.line("probe skipped: no verified dual pair");
                result["probe"] = Value::Null;
            }
        }
    }
    Ok(Outcome {
        result,
        text: t.finish(),
    })
}

fn subspace_json(s: &Subspace, tol: &Tolerance) -> Value {
    vectors_json(&s.canonical_basis(tol).basis_vectors())
}

fn subspace_text(s: &Subspace, tol: &Tolerance) -> String {
    let vs: Vec<String> = s
        .canonical_basis(tol)
        .basis_vectors()
        .iter()
        .map(|b| fmt_vec(b.as_slice()))
        .collect();
    if vs.is_empty() {
        "{0}".into()
    } else {
        format!("span{{{}}}", vs.join(", "))
    }
}

fn construct_parseval(doc: &FrameDocument, tol: &Tolerance) -> CliResult<Outcome> {
    let w = &doc.frame;
    let root = crate::linalg::spd_inv_sqrt(&w.frame_operator(), tol).map_err(|_| Error::NotAFrame {
        lower_bound: w.frame_bounds().0,
    })?;
    let targets = w.image(&root, tol)?.subspaces();
    let mut names = vec!["self"];
    let mut exts = vec![targets];
    if let Some(v) = &doc.dual {
        names.push("document");
        exts.push(v.subspaces());
    }
    let fam = parseval_optimal_family(w, &exts, doc.basis.as_deref(), tol)?;
    let all: Vec<usize> = (0..fam.frame.len()).collect();
    let labels = member_labels(&fam.frame, &all);
    let s_f = fam.frame.frame_operator();
    let parseval_dev = (&s_f - &Matrix::identity(w.ambient_dim())).frobenius_norm();
    let mut t = Text::default();
    t.heading("Parseval frame from a Riesz fusion basis");
    t.field(
        "basis source",
        if doc.basis.is_some() { "document" } else { "constructed" },
    );
    t.vectors(
        "basis",
        &(1..=fam.basis.len()).map(|k| format!("e{k}")).collect::<Vec<_>>(),
        &fam.basis,
    );
    t.vectors("F", &labels, fam.frame.vectors());
    t.field("||S_F - I||_F", fmt_num(parseval_dev));
    let mut duals = Vec::new();
    for ((name, g), d1) in names.iter().zip(&fam.duals).zip(&fam.d1) {
        let (_, residual) = verify_discrete_dual(&fam.frame, g, tol)?;
        t.heading(&format!("dual from {name} extension"));
        t.vectors("G", &labels, g.vectors());
        t.field("dual residual", fmt_num(residual));
        t.field("d_1 (operator)", fmt_num(*d1));
        duals.push(json!({
            "extension": name,
            "vectors": vectors_json(g.vectors()),
            "dual_residual": residual,
            "d1_operator": d1,
        }));
    }
    Ok(Outcome {
        result: json!({
            "basis": vectors_json(&fam.basis),
            "labels": labels_json(&fam.frame, &all),
            "frame": vectors_json(fam.frame.vectors()),
            "parseval_deviation": parseval_dev,
            "duals": duals,
        }),
        text: t.finish(),
    })
}

fn construct_expand(doc: &FrameDocument, index: Option<usize>, canonical: bool, tol: &Tolerance) -> CliResult<Outcome> {
    let (v, source) = pick_dual(doc, canonical, tol)?;
    let pair = DualPair::new(doc.frame.clone(), v, tol)?;
    let m = pair.len();
    let members: Vec<usize> = match index {
        Some(i) if i == 0 || i > m => return Err(Error::IndexOutOfRange { index: i, total: m }.into()),
        Some(i) => vec![i - 1],
        None => (0..m).collect(),
    };
    let top = 2.min(m.saturating_sub(1));
    let baseline: Vec<f64> = (1..=top)
        .map(|r| worst_case_error(&pair, r, NormKind::Frobenius, tol).map(|rep| rep.worst_value))
        .collect::<Result<_, _>>()?;
    let mut t = Text::default();
    t.heading("optimal dual expansions");
    t.field("dual", source);
    for (r, b) in baseline.iter().enumerate() {
        t.field(&format!("d_{} (Frobenius)", r + 1), fmt_num(*b));
    }
    let mut out = Vec::new();
    for &i in &members {
        let vars = expand_optimal_family(&pair, i, tol)?;
        t.heading(&format!("member {}", i + 1));
        t.field("V_i", subspace_text(pair.dual().subspace(i), tol));
        if vars.is_empty() {
            t.line("no variant applies");
        }
        for var in vars {
            let p = DualPair::new(pair.primal().clone(), var.dual.clone(), tol)?;
            let values: Vec<f64> = (1..=top)
                .map(|r| worst_case_error(&p, r, NormKind::Frobenius, tol).map(|rep| rep.worst_value))
                .collect::<Result<_, _>>()?;
            let kind = match &var.kind {
                ExpansionKind::ZeroComponent => "zero component".to_string(),
                ExpansionKind::Trimmed => "trimmed".to_string(),
                ExpansionKind::Extended { direction } => format!("extended by {}", fmt_vec(direction)),
            };
            let zi = var.dual.subspace(i);
            t.field(&kind, subspace_text(zi, tol));
            let vals: Vec<String> = values.iter().map(|x| fmt_num(*x)).collect();
            t.field("  d_r values", vals.join(", "));
            t.field("  dual residual", fmt_num(p.duality_residual()));
            out.push(json!({
                "member": i + 1,
                "kind": var.kind,
                "subspace": subspace_json(zi, tol),
                "dual_residual": p.duality_residual(),
                "d_values": values,
            }));
        }
    }
    Ok(Outcome {
        result: json!({
            "dual_source": source,
            "baseline_d_values": baseline,
            "variants": out,
        }),
        text: t.finish(),
    })
}

fn construct_bridge(doc: &FrameDocument, mode: BridgeArg, tol: &Tolerance) -> CliResult<Outcome> {
    let w = &doc.frame;
    let basis = doc_basis(doc);
    let mode = match mode {
        BridgeArg::CanonicalWeighted => BridgeMode::CanonicalWeighted,
        BridgeArg::ParsevalSqrt => BridgeMode::ParsevalSqrt,
    };
    let raw = bridge_fusion_to_discrete(w, &basis, mode, tol)?;
    let (f, kept) = raw.compact_nonzero(tol);
    let all: Vec<usize> = (0..raw.len()).collect();
    let compact_idx: Vec<usize> = (0..f.len()).collect();
    let s_f = f.frame_operator();
    let canon = f.canonical_dual(tol)?;
    let fusion_canon = bridge_dual_to_discrete(&w.canonical_dual(tol)?, &basis, tol)?;
    let fusion_canon_c = fusion_canon.select(&kept);
    let (fc_ok, fc_res) = verify_discrete_dual(&f, &fusion_canon_c, tol)?;

    let mut t = Text::default();
    t.heading("bridged vector frame");
    t.field(
        "mode",
        serde_json::to_value(mode)
            .expect("mode serializes")
            .as_str()
            .unwrap_or_default(),
    );
    t.field("raw vectors", raw.len().to_string());
    t.field("nonzero vectors", f.len().to_string());
    t.vectors("F (all labels)", &member_labels(&raw, &all), raw.vectors());
    t.vectors("F (nonzero, renumbered)", &member_labels(&f, &compact_idx), f.vectors());
    t.matrix("S_F", &s_f);
    t.vectors("S_F^-1 F", &member_labels(&f, &compact_idx), canon.vectors());
    t.vectors(
        "bridged canonical fusion dual",
        &member_labels(&f, &compact_idx),
        fusion_canon_c.vectors(),
    );
    t.field(
        "is dual of F",
        format!("{} (residual {})", yes_no(fc_ok), fmt_num(fc_res)),
    );

    let mut d1 = serde_json::Map::new();
    if f.len() >= 2 {
        t.heading("single-erasure worst case, canonical dual S_F^-1 F");
        for norm in [NormKind::Frobenius, NormKind::Operator] {
            let rep = discrete_worst_case(&f, &canon, 1, norm, tol)?;
            let sets: Vec<String> = rep.argmax_subsets.iter().map(|s| fmt_set(&one_based(s))).collect();
            t.field(
                &format!("d_1 ({norm})"),
                format!("{} at {}", fmt_num(rep.worst_value), sets.join(" ")),
            );
            d1.insert(norm.to_string(), report_json(&rep));
        }
    }
    Ok(Outcome {
        result: json!({
            "mode": mode,
            "basis": vectors_json(&basis),
            "raw": { "labels": labels_json(&raw, &all), "vectors": vectors_json(raw.vectors()) },
            "frame": {
                "raw_indices": one_based(&kept),
                "labels": labels_json(&f, &compact_idx),
                "vectors": vectors_json(f.vectors()),
            },
            "frame_operator": matrix_json(&s_f),
            "canonical_dual": vectors_json(canon.vectors()),
            "bridged_canonical_fusion_dual": {
                "vectors": vectors_json(fusion_canon_c.vectors()),
                "is_dual": fc_ok,
                "residual": fc_res,
            },
            "d1_canonical": Value::Object(d1),
        }),
        text: t.finish(),
    })
}
