//! What a compression has to preserve, and the independent checks used to
//! certify one: reach-by-time probabilities, limiting absorption
//! probabilities, Monte Carlo estimates, and an exhaustive minimality oracle.

mod absorption;
mod oracle;
mod reach;
mod simulate;

pub use absorption::{absorption_limit, Absorption};
pub use oracle::{brute_force_minimal, BRUTE_FORCE_LIMIT};
pub use reach::{
    preservation_check, reach_by_time, reach_table, InitialDistribution, PreservationReport,
    ReachReport,
};
pub use simulate::{simulate, EmpiricalReport};
