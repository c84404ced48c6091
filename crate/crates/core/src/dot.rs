//! Graphviz rendering of one transfer system, or of a refining pair with the
//! extra arrows of the second drawn dashed.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::transfer::TransferSystem;

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Covering arrows only; reflexive arrows are never drawn. With `by_class`,
/// subgroups are collapsed to their conjugacy classes.
pub fn render(name: &str, first: &TransferSystem, second: Option<&TransferSystem>, by_class: bool) -> Result<String> {
    let lat = first.lattice();
    if let Some(t) = second {
        if !first.refines(t)? {
            return Err(Error::domain("the first transfer system does not refine the second"));
        }
    }
    let node = |s: usize| if by_class { lat.classes()[lat.class_of(s)][0] } else { s };
    let mut solid: Vec<(usize, usize)> = first.hasse_pairs().into_iter().map(|(k, h)| (node(k), node(h))).collect();
    solid.sort_unstable();
    solid.dedup();
    let mut dashed: Vec<(usize, usize)> = second
        .map(|t| {
            t.hasse_pairs()
                .into_iter()
                .filter(|&(k, h)| !first.relates(k, h))
                .map(|(k, h)| (node(k), node(h)))
                .collect()
        })
        .unwrap_or_default();
    dashed.sort_unstable();
    dashed.dedup();
    dashed.retain(|p| !solid.contains(p));

    let mut nodes: Vec<usize> = (0..lat.len()).map(node).collect();
    nodes.dedup();
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quoted(name)).unwrap();
    writeln!(out, "  label={};", quoted(lat.group().name())).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    let mut orders: Vec<usize> = nodes.iter().map(|&s| lat.order(s)).collect();
    orders.dedup();
    for order in orders {
        let same: Vec<String> = nodes
            .iter()
            .filter(|&&s| lat.order(s) == order)
            .map(|&s| quoted(lat.label(s)))
            .collect();
        writeln!(out, "  {{ rank=same; {}; }}", same.join("; ")).unwrap();
    }
    for (k, h) in &solid {
        writeln!(out, "  {} -> {};", quoted(lat.label(*k)), quoted(lat.label(*h))).unwrap();
    }
    for (k, h) in &dashed {
        writeln!(out, "  {} -> {} [style=dashed];", quoted(lat.label(*k)), quoted(lat.label(*h))).unwrap();
    }
    writeln!(out, "}}").unwrap();
    Ok(out)
}
