//! Finite topological spaces and locally direct product subsets.
//!
//! A subset `C` of `X × Y` is *locally a product* when every point of
//! `X × Y` has an open box `U × V` around it with `C ∩ (U × V) = I × J`.
//! For closed, path-connected `C` this forces `C = A × B` globally. This
//! crate decides every ingredient of that statement for finite spaces,
//! sweeps all small topologies to check it exhaustively, and validates
//! finite models of spaces built from charts onto products ("2-spaces").
//!
//! Modules:
//! - [`space`]: specialization preorders, opens, closure, connectivity, continuity.
//! - [`product`]: product spaces, rectangles, local product certificates, verdicts.
//! - [`harness`]: enumeration of all preorders and exhaustive sweeps.
//! - [`two_space`]: chart atlases, compatibility, 2-maps and 2-products.
//! - [`format`]: the line-oriented text formats for spaces, subsets and models.
//! - [`cli`]: the command-line front end used by the `locprod` binary.

pub mod cli;
pub mod error;
pub mod format;
pub mod harness;
pub mod product;
pub mod space;
pub mod two_space;

pub use error::{Error, Result};
pub use harness::{enumerate_preorders, fence_sweep, run_sweep, SweepConfig, SweepMode, SweepReport};
pub use product::{
    Decomposition, Hypotheses, HypothesisMask, LocalProductCertificate, ProductSpace, Subset, TheoremVerdict,
    VerdictOptions,
};
pub use space::{is_continuous, FiniteSpace, PointSet};

pub use two_space::{Chart, ChartDefect, TwoMap, TwoSpace};
