//! Text exports of a network: Graphviz DOT and the LP file format.

use std::fmt::Write;

use orderflow_core::{canonical_description, Network};

pub fn to_dot(net: &Network) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}_{}\" {{", net.kind().code(), net.n()).unwrap();
    out.push_str("  rankdir=LR;\n");
    for (v, key) in net.nodes().iter().enumerate() {
        let shape = if v == net.source() || v == net.sink() {
            ", shape=doublecircle"
        } else {
            ""
        };
        writeln!(out, "  n{v} [label=\"{key}\"{shape}];").unwrap();
    }
    for (a, arc) in net.arcs().enumerate() {
        writeln!(out, "  n{} -> n{} [label=\"f_{a}\"];", arc.tail, arc.head).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Terms per line, well under the 510-character line limit of LP readers.
const TERMS_PER_LINE: usize = 8;

/// The balance system of the flow polytope, one variable `f_a` per arc.
pub fn to_lp(net: &Network) -> String {
    let desc = canonical_description(net);
    let mut out = String::new();
    writeln!(
        out,
        "\\ Unit flows of the {} network on {} alternatives: {} nodes, {} arcs",
        net.kind(),
        net.n(),
        net.node_count(),
        net.arc_count()
    )
    .unwrap();
    out.push_str("Minimize\n obj: 0 f_0\nSubject To\n");
    for row in &desc.equalities {
        write!(out, " {}:", row.name).unwrap();
        for (k, &(a, c)) in row.coefficients.iter().enumerate() {
            if k > 0 && k % TERMS_PER_LINE == 0 {
                out.push_str("\n   ");
            }
            let sign = if c < 0.0 { '-' } else { '+' };
            let magnitude = c.abs();
            if magnitude == 1.0 {
                write!(out, " {sign} f_{a}").unwrap();
            } else {
                write!(out, " {sign} {magnitude} f_{a}").unwrap();
            }
        }
        writeln!(out, " = {}", row.rhs).unwrap();
    }
    out.push_str("Bounds\n");
    for a in 0..desc.variable_count() {
        writeln!(out, " f_{a} >= 0").unwrap();
    }
    out.push_str("End\n");
    out
}
