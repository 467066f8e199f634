//! Reading and writing chains.

mod document;
mod dot;

pub use document::{
    from_document, parse_chain, serialize_chain, serialize_document, to_document, AnyChain,
    ChainDocument,
};
pub use dot::export_dot;
