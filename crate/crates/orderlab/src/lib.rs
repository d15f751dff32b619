//! orderlab: computing with spaces of orders on finitely generated groups.
//!
//! The crate provides exact group arithmetic over a fixed catalog of
//! backends ([`group`]), computable order comparators ([`oracle`]), finite
//! window restrictions of binary relations with per-class axiom checking
//! ([`window`]), a backtracking certificate solver ([`search`]), and
//! recurrence/Conradian probes for the translation action on relations
//! ([`dynamics`]). [`report`] renders byte-stable JSON certificates and
//! replays them.

pub mod dyadic;
pub mod dynamics;
pub mod group;
pub mod oracle;
pub mod report;
pub mod search;
pub mod window;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("element {elem} does not belong to backend {spec}")]
    BackendMismatch { spec: String, elem: String },
    #[error("generator index {index} out of range (backend has {count} generators)")]
    BadGenerator { index: usize, count: usize },
    #[error("ball size cap of {cap} elements exceeded")]
    BallCapExceeded { cap: usize },
    #[error("duplicate window element: entries {first} and {second} coincide")]
    DuplicateElement { first: usize, second: usize },
    #[error("window and oracle use different group specs")]
    SpecMismatch,
    #[error("oracle `{0}` is not available for this group")]
    UnsupportedOracle(String),
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
