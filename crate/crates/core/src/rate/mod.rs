//! Achievable-rate and cut-set-bound evaluation engines.

pub mod cutset;
pub mod df_single;
pub mod lmnnc;
pub mod mnnc;
pub mod nnc;
pub mod terms;
pub mod two_relay;

#[cfg(test)]
pub(crate) mod testutil;

use crate::sets::NodeSet;

pub use cutset::{cutset_bound_relaxed, cutset_exact, cutset_exact_search};
pub use df_single::{cb_single, cb_single_opt, rate_df_single, rate_df_single_opt};
pub use lmnnc::{rate_lmnnc, rate_lmnnc_search};
pub use mnnc::{rate_mnnc, rate_noncoop};
pub use nnc::{rate_fd_nnc, rate_nnc};
pub use terms::{q_term, r_term, relay_rate_term, EvalCtx, FEAS_TOL};
pub use two_relay::rate_two_relay;

/// Relay-count guard for the exhaustive subset scans (2^N by 2^N nested).
pub const ENUM_CAP: usize = 10;

/// Outcome of a rate evaluation with its optimality certificate.
#[derive(Clone, Debug)]
pub struct RateResult {
    /// Achievable rate in bits per channel use (complex convention doubles).
    pub rate: f64,
    /// The subset attaining the binding minimum.
    pub binding_subset: NodeSet,
    /// Destination decoding set 𝒯 chosen by the search (or as fixed).
    pub chosen_t: NodeSet,
    /// Per decoding relay k, the chosen set 𝒯_k.
    pub chosen_relay_t: Vec<(usize, NodeSet)>,
    /// The compressing set 𝒱 the evaluation was run with.
    pub chosen_v: NodeSet,
    /// Layer structure, when the scheme is layered.
    pub chosen_layering: Option<Vec<NodeSet>>,
    /// Labelled constraint values entering the outer min.
    pub term_breakdown: Vec<(String, f64)>,
    /// False when the evaluated point fell outside the feasibility region.
    pub feasible: bool,
}

impl RateResult {
    pub fn term(&self, label: &str) -> Option<f64> {
        self.term_breakdown
            .iter()
            .find(|(l, _)| l == label)
            .map(|&(_, v)| v)
    }
}
