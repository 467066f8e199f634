use std::fmt::Write;

use crate::chain::{Chain, Targets};
use crate::numeric::Weight;
use crate::partition::Partition;

const PALETTE: [&str; 12] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
    "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
];

/// Graphviz digraph of the chain. Target states are drawn as double circles;
/// with a partition, each block gets its own fill colour.
pub fn export_dot<W: Weight>(
    chain: &Chain<W>,
    targets: &Targets,
    partition: Option<&Partition>,
) -> String {
    let owner = targets.class_of(chain.len());
    let mut out = String::from("digraph chain {\n  rankdir=LR;\n");
    for (s, class) in owner.iter().enumerate() {
        let shape = if class.is_some() {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = write!(out, "  n{s} [label={:?}, shape={shape}", chain.label(s));
        if let Some(p) = partition {
            let b = p.block_of(s);
            let _ = write!(
                out,
                ", style=filled, fillcolor=\"{}\"",
                PALETTE[b % PALETTE.len()]
            );
        }
        out += "];\n";
    }
    for (from, row) in chain.rows().iter().enumerate() {
        for (to, p) in row {
            let _ = writeln!(out, "  n{from} -> n{to} [label={:?}];", p.render());
        }
    }
    out += "}\n";
    out
}
