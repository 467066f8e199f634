//! Minimal lumping of finite Markov chains with respect to target sets.
//!
//! Given a chain and disjoint closed target classes, [`compress`] finds the
//! coarsest partition of the states that is lumpable and keeps each target
//! class as its own block. The induced quotient chain ([`build_quotient`])
//! has the same probability of having reached each class by every time `m`,
//! from every start state, as the original chain. Its size is the chain's
//! Markov complexity.
//!
//! ```
//! use lumpkit_core::{compress, gen_hypercube, Exact};
//!
//! let (chain, targets) = gen_hypercube::<Exact>(3, false).unwrap();
//! assert_eq!(compress(&chain, &targets).unwrap().complexity(), 4);
//! ```

pub mod analysis;
pub mod chain;
pub mod error;
pub mod generators;
pub mod io;
pub mod numeric;
pub mod partition;
pub mod quotient;
pub mod refine;

pub use analysis::{
    absorption_limit, brute_force_minimal, preservation_check, reach_by_time, reach_table,
    simulate, Absorption, EmpiricalReport, InitialDistribution, PreservationReport, ReachReport,
};
pub use chain::{
    block_mass, validate_chain, Chain, TargetClass, Targets, ValidationReport, Violation,
};
pub use error::{Error, Result};
pub use generators::{
    gen_consecutive_wins, gen_coupon, gen_gamblers_ruin, gen_hypercube, gen_negative_binomial,
    gen_pair_chain,
};
pub use io::{export_dot, parse_chain, serialize_chain, AnyChain};
pub use numeric::{Exact, Mode, Weight, DEFAULT_EPSILON};
pub use partition::{intersect_partitions, Partition};
pub use quotient::{build_quotient, verify_lumpability, Quotient};
pub use refine::{
    compress, compress_with, markov_complexity, refine_once, refinement_sequence, Compression,
};
