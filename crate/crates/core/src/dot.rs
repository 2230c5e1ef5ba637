//! Graphviz export. Height runs bottom to top; vertices at one height share
//! a rank and invisible edges keep the ranks in order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{KrGraph, Style, Vertex};
use crate::Height;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

fn height(h: &Height) -> String {
    format!("{}/{}", h.numer(), h.denom())
}

pub fn to_dot(g: &KrGraph) -> Result<String> {
    let report = g.validate();
    if !report.ok() {
        return Err(Error::InvalidGraph(report));
    }
    let mut vs: Vec<&Vertex> = g.vertices.iter().collect();
    vs.sort_by(|a, b| a.height.cmp(&b.height).then_with(|| a.id.cmp(&b.id)));
    let mut out = String::from("digraph kr {\n  rankdir=BT;\n  node [shape=circle, fontsize=10];\n");
    for v in &vs {
        let boundary = v.kind.is_plain_boundary() || v.kind.is_pinned();
        let _ = writeln!(
            out,
            "  {} [label={}{}];",
            quote(&v.id),
            quote(&format!("{}\\n{} {}", v.id, v.kind, height(&v.height))),
            if boundary { ", penwidth=3" } else { "" }
        );
    }
    let mut edges: Vec<_> = g.edges.iter().collect();
    edges.sort_by(|a, b| a.id.cmp(&b.id));
    for e in edges {
        let attrs = match (&e.style, &e.walls) {
            (Style::Bold, Some((l, r))) => format!("label={}, penwidth=4", quote(&format!("{} {}|{}", e.id, l, r))),
            _ => format!("label={}", quote(&e.id)),
        };
        let _ = writeln!(out, "  {} -> {} [{attrs}];", quote(&e.lower), quote(&e.upper));
    }
    let mut levels: BTreeMap<Height, Vec<&str>> = BTreeMap::new();
    for v in &vs {
        levels.entry(v.height).or_default().push(&v.id);
    }
    for ids in levels.values() {
        let names: Vec<String> = ids.iter().map(|i| quote(i)).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", names.join("; "));
    }
    let firsts: Vec<&str> = levels.values().map(|ids| ids[0]).collect();
    for w in firsts.windows(2) {
        let _ = writeln!(out, "  {} -> {} [style=invis];", quote(w[0]), quote(w[1]));
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn count(s: &str, pat: &str) -> usize {
        s.matches(pat).count()
    }

    #[test]
    fn disk_renders_two_nodes() {
        let d = to_dot(&disk()).unwrap();
        assert_eq!(count(&d, "[label="), 3);
        assert_eq!(count(&d, " -> "), 2);
        assert_eq!(count(&d, "style=invis"), 1);
        assert_eq!(count(&d, "penwidth=4"), 0);
    }

    #[test]
    fn pants_and_ladder() {
        let p = to_dot(&pants([h(1, 5), h(3, 10), h(1, 2), h(4, 5)])).unwrap();
        assert_eq!(count(&p, "\\n"), 4);
        let x = to_dot(&x_graph()).unwrap();
        assert_eq!(count(&x, "\\n"), 5);
        assert_eq!(count(&x, "penwidth=4"), 4);
        assert_eq!(x, to_dot(&x_graph()).unwrap());
    }

    #[test]
    fn invalid_graph_is_refused() {
        let mut g = disk();
        g.edges.clear();
        assert!(matches!(to_dot(&g), Err(Error::InvalidGraph(_))));
    }
}
