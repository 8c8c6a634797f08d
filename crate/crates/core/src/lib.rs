//! Dual fusion frames in finite dimensions and their behaviour under erasures.
//!
//! A fusion frame is a family of weighted subspaces `(Wᵢ, ωᵢ)` of `ℝⁿ` whose
//! frame operator `S_W = Σ ωᵢ² π_{Wᵢ}` is invertible. A weighted family
//! `(Vᵢ, νᵢ)` is a dual when `Σ ωᵢ νᵢ π_{Vᵢ} S_W⁻¹ π_{Wᵢ} = I`. Losing the
//! members in `J` leaves the error operator `Σ_{i∈J} ωᵢ νᵢ π_{Vᵢ} S_W⁻¹ π_{Wᵢ}`,
//! and this crate measures, compares and certifies duals by the worst norm
//! of that operator.
//!
//! ```
//! use fusion_dual::{DualPair, FusionFrame, NormKind, Subspace, Tolerance, worst_case_error};
//!
//! let tol = Tolerance::default();
//! let w = FusionFrame::uniform(
//!     4,
//!     vec![
//!         Subspace::coordinate(4, &[0, 1]),
//!         Subspace::coordinate(4, &[1, 2]),
//!         Subspace::coordinate(4, &[3]),
//!     ],
//! )?;
//! let pair = DualPair::canonical(w, &tol)?;
//! let report = worst_case_error(&pair, 1, NormKind::Frobenius, &tol)?;
//! assert!((report.worst_value - 1.25f64.sqrt()).abs() < 1e-12);
//! # Ok::<(), fusion_dual::Error>(())
//! ```

pub mod cli;
pub mod discrete;
pub mod duality;
pub mod erasures;
pub mod error;
pub mod fusion;
pub mod linalg;
pub mod optimality;
pub mod sampling;

pub use discrete::{BridgeMode, DiscreteFrame, DualPerturbation};
pub use duality::{verify_dual, DualPair, LeftInverseMap};
pub use erasures::{worst_case_error, ErasureMask, ErasureReport, NormKind};
pub use error::{Error, Result};
pub use fusion::{FrameClassification, FusionFrame, Member};
pub use linalg::{Matrix, Subspace, Tolerance, Vector};
pub use optimality::{Certificate, ProbeOutcome, Verdict};
