use std::collections::BTreeMap;
use std::sync::OnceLock;

use krcalc::canonical::canonical_from_invariants;
use krcalc::circle::{circle_equivalent, cut, glue, regular_values, CircleKrGraph};
use krcalc::enumerate::{enumerate_circle_graphs, enumerate_descriptors, enumerate_graphs, EnumBound};
use krcalc::graph::kr_equivalent;
use krcalc::surface::same_component_real;
use krcalc::surgery::{applicable_moves, apply_move, inverse};
use krcalc::{text, walk, Height, KrGraph, RealMorseDescriptor};
use proptest::prelude::*;

fn graphs() -> &'static [KrGraph] {
    static G: OnceLock<Vec<KrGraph>> = OnceLock::new();
    G.get_or_init(|| enumerate_graphs(&EnumBound::vertices(6)))
}

fn circle_graphs() -> &'static [CircleKrGraph] {
    static G: OnceLock<Vec<CircleKrGraph>> = OnceLock::new();
    G.get_or_init(|| enumerate_circle_graphs(&EnumBound::vertices(4), 2))
}

/// Descriptors grouped by signature, so triples share one.
fn descriptor_groups() -> &'static [Vec<RealMorseDescriptor>] {
    static D: OnceLock<Vec<Vec<RealMorseDescriptor>>> = OnceLock::new();
    D.get_or_init(|| {
        let mut by_sig: BTreeMap<String, Vec<RealMorseDescriptor>> = BTreeMap::new();
        for d in enumerate_descriptors(4, 1, 3, 2) {
            by_sig.entry(format!("{:?}", d.sig)).or_default().push(d);
        }
        by_sig.into_values().collect()
    })
}

fn walked(index: usize, steps: usize, seed: u64) -> KrGraph {
    let gs = graphs();
    walk::random_walk(&gs[index % gs.len()], steps, seed).unwrap()
}

/// Renames every vertex, edge and wall and stretches the heights without
/// changing their order.
fn disguise(g: &KrGraph) -> KrGraph {
    let mut h = g.clone();
    let plain: Vec<String> = g.vertices.iter().filter(|v| v.kind.is_plain_boundary()).map(|v| v.id.clone()).collect();
    let rename = |s: &str| if plain.iter().any(|p| p == s) { s.to_string() } else { format!("z_{s}") };
    for v in &mut h.vertices {
        v.id = rename(&v.id);
        if !v.kind.is_pinned() {
            v.height = v.height * v.height;
        }
    }
    for e in &mut h.edges {
        e.id = format!("q_{}", e.id);
        e.lower = rename(&e.lower);
        e.upper = rename(&e.upper);
        if let Some((l, r)) = &mut e.walls {
            *l = format!("w_{l}");
            *r = format!("w_{r}");
        }
    }
    h.edges.reverse();
    h.vertices.reverse();
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trips(i in 0usize..10_000, steps in 0usize..8, seed in any::<u64>()) {
        let g = walked(i, steps, seed);
        let s = text::write_graph(&g);
        let back = text::parse_graph(&s).unwrap();
        prop_assert_eq!(text::write_graph(&back), s);
        prop_assert!(kr_equivalent(&back, &g).unwrap());
    }

    #[test]
    fn moves_keep_invariants_and_invert(i in 0usize..10_000, steps in 0usize..6, seed in any::<u64>(), pick in any::<usize>()) {
        let g = walked(i, steps, seed);
        let moves = applicable_moves(&g).unwrap();
        prop_assume!(!moves.is_empty());
        let m = &moves[pick % moves.len()];
        let h = apply_move(&g, m).unwrap();
        prop_assert!(h.validate().ok());
        prop_assert_eq!(h.derived_invariants().unwrap(), g.derived_invariants().unwrap());
        let back = apply_move(&h, &inverse(&g, m).unwrap()).unwrap();
        prop_assert!(kr_equivalent(&back, &g).unwrap());
    }

    #[test]
    fn certificate_ignores_names_and_spacing(i in 0usize..10_000, steps in 0usize..6, seed in any::<u64>()) {
        let g = walked(i, steps, seed);
        let h = disguise(&g);
        prop_assert!(h.validate().ok(), "{}", h.validate());
        prop_assert!(kr_equivalent(&g, &h).unwrap());
    }

    #[test]
    fn euler_three_ways(i in 0usize..10_000, steps in 0usize..6, seed in any::<u64>()) {
        let g = walked(i, steps, seed);
        let c = g.critical_counts().unwrap();
        let from_sig = 2 - 2 * i64::from(g.sig.genus) - g.sig.boundary.len() as i64;
        let from_counts = i64::from(g.sig.corner_total()) + i64::from(c[0]) - i64::from(c[1]) + i64::from(c[2]);
        prop_assert_eq!(g.euler_from_pieces().unwrap(), from_sig);
        prop_assert_eq!(from_sig, from_counts);
    }

    #[test]
    fn real_decider_is_an_equivalence(group in any::<usize>(), a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
        let ds = &descriptor_groups()[group % descriptor_groups().len()];
        let (f, g, h) = (&ds[a % ds.len()], &ds[b % ds.len()], &ds[c % ds.len()]);
        prop_assert!(same_component_real(f, f).unwrap());
        let fg = same_component_real(f, g).unwrap();
        prop_assert_eq!(fg, same_component_real(g, f).unwrap());
        if fg && same_component_real(g, h).unwrap() {
            prop_assert!(same_component_real(f, h).unwrap());
        }
    }

    #[test]
    fn canonical_graphs_reproduce_descriptors(group in any::<usize>(), a in any::<usize>()) {
        let ds = &descriptor_groups()[group % descriptor_groups().len()];
        let d = &ds[a % ds.len()];
        let g = canonical_from_invariants(d).unwrap();
        prop_assert_eq!(&g.descriptor().unwrap(), d);
    }

    #[test]
    fn cut_then_glue_returns_the_graph(i in any::<usize>(), arc in any::<usize>(), shift in 0i64..7) {
        let gs = circle_graphs();
        let g = &gs[i % gs.len()];
        let arcs = regular_values(g);
        let a = &arcs[arc % arcs.len()];
        // any regular value inside the arc will do, not only the midpoint
        let m = a.midpoint();
        let v = match a {
            krcalc::circle::RegularArc::Whole => Height::new(shift, 7),
            _ => m,
        };
        let r = cut(g, v).unwrap();
        prop_assert!(circle_equivalent(&glue(&r).unwrap(), g).unwrap());
    }

    #[test]
    fn parser_never_panics(s in "(surface|vertex|edge|boundary|c|eps|at|piece|end|pair|[a-z0-9/ +-]){0,12}(\n(vertex|edge|[a-zA-Z0-9/ +-]){0,10}){0,4}") {
        let _ = text::parse(&s);
    }
}
