//! Analytics over recipe corpora.
//!
//! The crate is organized as a pipeline of small, independently testable
//! stages:
//!
//! * [`corpus`] — JSONL ingestion, ingredient normalization, and
//!   lexicon-driven standardization, plus the country/region tables that
//!   later stages join against.
//! * [`metrics`] — balanced per-cuisine sampling, ingredient diversity
//!   (global counts and Shannon entropy), recipe-complexity scores, and
//!   least-squares polynomial fits.
//! * [`signatures`] — TF-IDF weights over cuisine ingredient usage and
//!   top-k "notable ingredient" extraction.
//! * [`similarity`] — Jensen-Shannon divergence between ingredient
//!   distributions, Gaussian flavor models with symmetrized KL, and top-k
//!   nearest-neighbor graphs with DOT/GraphML/JSON export.
//! * [`classify`] — boolean ingredient features, stratified splits, a
//!   linear one-vs-rest SVM, and a feed-forward network trained with
//!   Adadelta; both are deterministic given a seed.
//! * [`health`] — rating-weighted per-country nutrition averages and
//!   their Pearson / Kendall tau-b correlation with country health
//!   statistics.
//! * [`synth`] — seeded synthetic corpus generation used by the test
//!   suites and the bundled fixtures.
//!
//! Every operation that consumes randomness takes an explicit seed and
//! derives per-task streams via [`seed::derive`], so outputs are
//! reproducible byte-for-byte across runs and platforms.

pub mod classify;
pub mod corpus;
pub mod error;
pub mod health;
pub mod metrics;
pub mod seed;
pub mod signatures;
pub mod similarity;
pub mod synth;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

/// Library version, for run manifests and serialized artifacts.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
