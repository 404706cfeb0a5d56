//! Bound calculators, the exact union bound and the Monte Carlo harness.

mod bounds;
mod trials;
mod union;

pub use bounds::{bound_awgn, bound_bsc, gaussian_tail, BoundChannel, BoundResult};
pub use trials::{
    run_trials, summarize, validate_chain, wilson_interval, wilson_standard_error, ChainReport,
    ChainViolation, TrialOptions, TrialRecord, TrialRun, TrialSummary, TxMode,
};
pub use union::{default_delta, union_bound_exact, UnionBoundResult, MAX_UNION_PATHS};
