//! Exact maximum-likelihood decoding by enumeration and exact LP decoding
//! over the intersection of local convex hulls.

mod lp;
mod ml;
pub mod simplex;

pub use lp::{
    build_lp, decode_lp, decode_lp_exact, lp_vertex_audit, AuditReport, LpDecoder, LpModel,
    LpSolution, MAX_LP_LOCAL_WORDS,
};
pub use ml::{decode_ml, decode_ml_exact, MlDecoder, MlResult};
