//! Worked example families and random test chains.

mod families;
pub mod random;

pub use families::{
    coupon_initial, gen_consecutive_wins, gen_coupon, gen_gamblers_ruin, gen_hypercube,
    gen_negative_binomial, gen_pair_chain, hypercube_label, hypercube_order,
};
