//! Canonical printer: the inverse of the parser on canonical forms.

use std::collections::BTreeMap;

use crate::complex::{ForkComplex, ForkId, GeneralizedSplitting, NodeId, NodeKind, Side};

/// Canonical display names: forks `f0, f1, ...` in canonical order, grips
/// `s0, s1, ...` and tines `t0, t1, ...` in canonical numbering order.
pub fn canonical_names(
    complex: &ForkComplex,
) -> (BTreeMap<NodeId, String>, BTreeMap<ForkId, String>) {
    let order = complex.canonical_order();
    let mut node_names = BTreeMap::new();
    let (mut grips, mut tines) = (0, 0);
    for &id in &order.nodes {
        let name = match complex.node(id).kind {
            NodeKind::Grip => {
                grips += 1;
                format!("s{}", grips - 1)
            }
            NodeKind::Tine => {
                tines += 1;
                format!("t{}", tines - 1)
            }
        };
        node_names.insert(id, name);
    }
    let fork_names = order
        .forks
        .iter()
        .enumerate()
        .map(|(i, &f)| (f, format!("f{i}")))
        .collect();
    (node_names, fork_names)
}

/// Prints a splitting in the document language, deterministically: forks in
/// canonical order with canonical node names, then assertions sorted by
/// node and claim. Parsing the output reproduces the same canonical form.
pub fn format_complex(gs: &GeneralizedSplitting) -> String {
    let complex = gs.complex();
    let order = complex.canonical_order();
    let (node_names, fork_names) = canonical_names(complex);

    let mut out = String::new();
    for &fid in &order.forks {
        let fork = complex.fork(fid);
        let side = match fork.side {
            Side::A => "A",
            Side::B => "B",
        };
        out.push_str(&format!(
            "fork {} side {side} grip {}:{}",
            fork_names[&fid], node_names[&fork.grip], complex.node(fork.grip).label
        ));
        if !fork.tines.is_empty() {
            let mut tines: Vec<NodeId> = fork.tines.clone();
            tines.sort_by_key(|t| node_names[t].clone());
            let rendered: Vec<String> = tines
                .iter()
                .map(|t| format!("{}:{}", node_names[t], complex.node(*t).label))
                .collect();
            out.push_str(&format!(" tines {}", rendered.join(",")));
        }
        out.push('\n');
    }

    let mut asserts: Vec<(String, String)> = Vec::new();
    for (node, claims) in gs.assertions() {
        if let Some(id) = complex.node_by_name(node) {
            for claim in claims {
                asserts.push((node_names[&id].clone(), claim.clone()));
            }
        }
    }
    asserts.sort();
    for (node, claim) in asserts {
        let escaped = claim.replace('\\', "\\\\").replace('"', "\\\"");
        out.push_str(&format!("assert {node} \"{escaped}\"\n"));
    }
    out
}
