//! Exhaustive generation of small graphs and descriptors.
//!
//! Graphs are grown by a sweep from the bottom level: every step adds one
//! vertex that consumes open edge stubs and opens new ones. Results are
//! deduplicated by certificate, so the stub choices only need to cover every
//! structure, not avoid repeats.

use std::collections::{BTreeMap, HashSet};

use crate::circle::{derive_descriptor, CircleEdge, CircleKrGraph, Dsu};
use crate::graph::{Edge, KrGraph, Style, Vertex, VertexKind};
use crate::surface::{validate_real, BoundaryComponent, RealMorseDescriptor, Sign, SurfaceSig};
use crate::text;
use crate::Height;

/// Size limits for enumeration. `max_vertices` counts every vertex,
/// terminals included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBound {
    pub max_vertices: usize,
    pub max_genus: u32,
    pub max_boundary: usize,
    pub max_corners: u32,
}

impl EnumBound {
    pub fn new(max_vertices: usize, max_genus: u32, max_boundary: usize, max_corners: u32) -> Self {
        Self {
            max_vertices,
            max_genus,
            max_boundary,
            max_corners,
        }
    }

    /// Only the vertex count limits the search.
    pub fn vertices(max_vertices: usize) -> Self {
        Self::new(max_vertices, u32::MAX, usize::MAX, u32::MAX)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Src {
    Terminal(usize),
    Wrap(usize),
    Vertex(usize),
}

#[derive(Debug, Clone)]
struct Stub {
    from: Src,
    style: Style,
    walls: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
struct RawEdge {
    from: Src,
    to: usize,
    style: Style,
    walls: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Default)]
struct Sweep {
    kinds: Vec<VertexKind>,
    edges: Vec<RawEdge>,
    open: Vec<Stub>,
    plain: usize,
}

impl Sweep {
    fn thin(&self) -> Vec<usize> {
        (0..self.open.len()).filter(|&i| self.open[i].style == Style::Thin).collect()
    }

    fn bold(&self) -> Vec<usize> {
        (0..self.open.len()).filter(|&i| self.open[i].style == Style::Bold).collect()
    }

    /// Adds a vertex consuming `take` and opening `open`.
    fn step(&self, kind: VertexKind, take: &[usize], open: &[(Style, Option<(usize, usize)>)]) -> Sweep {
        let mut next = self.clone();
        let r = next.kinds.len();
        next.kinds.push(kind);
        let mut take = take.to_vec();
        take.sort_unstable_by(|a, b| b.cmp(a));
        for i in take {
            let s = next.open.remove(i);
            next.edges.push(RawEdge {
                from: s.from,
                to: r,
                style: s.style,
                walls: s.walls,
            });
        }
        for &(style, walls) in open {
            next.open.push(Stub {
                from: Src::Vertex(r),
                style,
                walls,
            });
        }
        if kind.is_plain_boundary() {
            next.plain += 1;
        }
        next
    }

    /// Every way to add one more vertex. Choices that differ only by
    /// swapping stubs of the same origin are generated once.
    fn children(&self, allow_plain: bool) -> Vec<Sweep> {
        let thin = self.thin();
        let bold = self.bold();
        let origin = |i: usize| self.open[i].from;
        let mut out = Vec::new();
        let t = (Style::Thin, None);

        out.push(self.step(VertexKind::EMin, &[], &[t]));
        if allow_plain {
            out.push(self.step(VertexKind::DMin, &[], &[t]));
        }
        let mut seen = HashSet::new();
        for &i in &thin {
            if !seen.insert(origin(i)) {
                continue;
            }
            out.push(self.step(VertexKind::EMax, &[i], &[]));
            if allow_plain {
                out.push(self.step(VertexKind::DMax, &[i], &[]));
            }
            out.push(self.step(VertexKind::S3T, &[i], &[t, t]));
        }
        let mut seen = HashSet::new();
        for (a, &i) in thin.iter().enumerate() {
            for &j in &thin[a + 1..] {
                if seen.insert((origin(i), origin(j))) {
                    out.push(self.step(VertexKind::S3T, &[i, j], &[t]));
                }
            }
        }
        for &i in &bold {
            let w = self.open[i].walls;
            out.push(self.step(VertexKind::S3M, &[i], &[(Style::Bold, w), t]));
            let mut seen = HashSet::new();
            for &j in &thin {
                if seen.insert(origin(j)) {
                    out.push(self.step(VertexKind::S3M, &[i, j], &[(Style::Bold, w)]));
                }
            }
        }
        for (a, &i) in bold.iter().enumerate() {
            for &j in &bold[a + 1..] {
                let (Some((l1, r1)), Some((l2, r2))) = (self.open[i].walls, self.open[j].walls) else {
                    continue;
                };
                out.push(self.step(
                    VertexKind::S4B,
                    &[i, j],
                    &[(Style::Bold, Some((l1, r2))), (Style::Bold, Some((l2, r1)))],
                ));
            }
        }
        out
    }
}

fn rank_height(r: usize, n: usize) -> Height {
    Height::new(r as i64 + 1, n as i64 + 1)
}

/// Ids for the interior vertices: plain boundary vertices take the labels
/// `d1`, `d2`, ... with minima first, the rest are `v<rank>`.
fn interior_ids(kinds: &[VertexKind]) -> Vec<String> {
    let mut ids: Vec<String> = (0..kinds.len()).map(|r| format!("v{}", r + 1)).collect();
    let mut next = 1;
    for want in [VertexKind::DMin, VertexKind::DMax] {
        for (r, &k) in kinds.iter().enumerate() {
            if k == want {
                ids[r] = format!("d{next}");
                next += 1;
            }
        }
    }
    ids
}

fn genus_for(chi: i64, boundary: usize) -> Option<u32> {
    let twice = 2 - boundary as i64 - chi;
    (twice >= 0 && twice % 2 == 0).then_some((twice / 2) as u32)
}

/// All valid generic connected graphs within the bound, one per
/// KR-equivalence class, ordered by vertex count, signature and
/// certificate. Graphs use only the standard vertex kinds.
pub fn enumerate_graphs(b: &EnumBound) -> Vec<KrGraph> {
    let mut found: BTreeMap<(usize, String, String), KrGraph> = BTreeMap::new();
    let max_k = (b.max_vertices / 2).min(b.max_corners as usize);
    for k in 0..=max_k {
        let start = Sweep {
            open: (0..k)
                .map(|i| Stub {
                    from: Src::Terminal(i),
                    style: Style::Bold,
                    walls: Some((2 * i, 2 * i + 1)),
                })
                .collect(),
            ..Sweep::default()
        };
        grow_real(&start, k, b, &mut found);
    }
    found.into_values().collect()
}

fn grow_real(s: &Sweep, k: usize, b: &EnumBound, found: &mut BTreeMap<(usize, String, String), KrGraph>) {
    let thin = s.thin().len();
    if s.kinds.len() + 2 * k + thin > b.max_vertices {
        return;
    }
    if thin == 0 && !(s.kinds.is_empty() && k == 0) {
        if let Some(g) = finish_real(s, k, b) {
            let key = (g.vertices.len(), sig_key(&g.sig), g.certificate_unchecked());
            found.entry(key).or_insert(g);
        }
    }
    if s.kinds.len() + 2 * k + thin.max(1) > b.max_vertices {
        return;
    }
    let allow_plain = s.plain + usize::from(k > 0) < b.max_boundary;
    for child in s.children(allow_plain) {
        grow_real(&child, k, b, found);
    }
}

fn sig_key(sig: &SurfaceSig) -> String {
    let mut out = format!("{} {}", sig.genus, sig.components);
    for c in &sig.boundary {
        out.push_str(&format!(" {}:{}", c.label, c.k));
    }
    out
}

fn finish_real(s: &Sweep, k: usize, b: &EnumBound) -> Option<KrGraph> {
    let n = s.kinds.len();
    let ids = interior_ids(&s.kinds);
    let mut vertices: Vec<Vertex> = Vec::new();
    for i in 0..k {
        vertices.push(Vertex {
            id: format!("t{}", i + 1),
            kind: VertexKind::TMin,
            height: Height::new(0, 1),
        });
    }
    for (r, &kind) in s.kinds.iter().enumerate() {
        vertices.push(Vertex {
            id: ids[r].clone(),
            kind,
            height: rank_height(r, n),
        });
    }
    let name = |src: Src| match src {
        Src::Terminal(i) => format!("t{}", i + 1),
        Src::Vertex(r) => ids[r].clone(),
        Src::Wrap(_) => unreachable!("no wraps over the interval"),
    };
    let wall_name = |w: usize| format!("{}{}", if w % 2 == 0 { "l" } else { "r" }, w / 2 + 1);
    let walls = |w: Option<(usize, usize)>| w.map(|(l, r)| (wall_name(l), wall_name(r)));

    let mut dsu = Dsu::new(2 * k);
    for i in 0..k {
        dsu.union(2 * i, 2 * i + 1);
    }
    let mut edges: Vec<Edge> = s
        .edges
        .iter()
        .map(|e| Edge {
            id: String::new(),
            lower: name(e.from),
            upper: ids[e.to].clone(),
            style: e.style,
            walls: walls(e.walls),
        })
        .collect();
    for (j, stub) in s.open.iter().enumerate() {
        let id = format!("u{}", j + 1);
        vertices.push(Vertex {
            id: id.clone(),
            kind: VertexKind::TMax,
            height: Height::new(1, 1),
        });
        let (l, r) = stub.walls.expect("only bold stubs stay open");
        dsu.union(l, r);
        edges.push(Edge {
            id: String::new(),
            lower: name(stub.from),
            upper: id,
            style: Style::Bold,
            walls: walls(stub.walls),
        });
    }
    for (i, e) in edges.iter_mut().enumerate() {
        e.id = format!("e{}", i + 1);
    }

    let mut per_root: BTreeMap<usize, u32> = BTreeMap::new();
    for i in 0..k {
        *per_root.entry(dsu.find(2 * i)).or_insert(0) += 1;
    }
    let mut ks: Vec<u32> = per_root.into_values().collect();
    ks.sort_unstable();
    let mut boundary: Vec<BoundaryComponent> = (1..=s.plain).map(|i| BoundaryComponent::new(&format!("d{i}"), 0)).collect();
    for (i, &kk) in ks.iter().enumerate() {
        boundary.push(BoundaryComponent::new(&format!("w{}", i + 1), kk));
    }
    if boundary.len() > b.max_boundary {
        return None;
    }
    let mut g = KrGraph {
        sig: SurfaceSig::connected(0, boundary),
        vertices,
        edges,
    };
    let genus = genus_for(g.pieces_chi(), g.sig.boundary.len())?;
    if genus > b.max_genus {
        return None;
    }
    g.sig.genus = genus;
    g.validate().ok().then_some(g)
}

/// Valid generic connected circle-valued graphs with at most
/// `b.max_vertices` vertices and at most `max_wraps` edges crossing the
/// base level, one per equivalence class. Corner bounds do not apply.
pub fn enumerate_circle_graphs(b: &EnumBound, max_wraps: usize) -> Vec<CircleKrGraph> {
    let mut found: BTreeMap<(usize, String, String), CircleKrGraph> = BTreeMap::new();
    for wraps in 0..=max_wraps {
        for bold in 0..=wraps {
            let thin = wraps - bold;
            let mut open: Vec<Stub> = (0..thin)
                .map(|j| Stub {
                    from: Src::Wrap(j),
                    style: Style::Thin,
                    walls: None,
                })
                .collect();
            open.extend((0..bold).map(|j| Stub {
                from: Src::Wrap(thin + j),
                style: Style::Bold,
                walls: Some((2 * j, 2 * j + 1)),
            }));
            let start = Sweep {
                open,
                ..Sweep::default()
            };
            grow_circle(&start, (thin, bold), b, &mut found);
        }
    }
    found.into_values().collect()
}

fn grow_circle(
    s: &Sweep,
    wraps: (usize, usize),
    b: &EnumBound,
    found: &mut BTreeMap<(usize, String, String), CircleKrGraph>,
) {
    let thin = s.thin().len();
    if s.kinds.len() + thin.abs_diff(wraps.0) > b.max_vertices {
        return;
    }
    if thin == wraps.0 && (wraps.0 + wraps.1 > 0 || !s.kinds.is_empty()) {
        for g in finish_circle(s, wraps, b) {
            let key = (
                g.vertices.len(),
                text::write_circle_descriptor(&g.descriptor),
                g.certificate().expect("generic by construction"),
            );
            found.entry(key).or_insert(g);
        }
    }
    if s.kinds.len() >= b.max_vertices {
        return;
    }
    let allow_plain = s.plain + usize::from(wraps.1 > 0) < b.max_boundary;
    for child in s.children(allow_plain) {
        grow_circle(&child, wraps, b, found);
    }
}

/// Closes a sweep into circle graphs, one per way of matching the open
/// stubs at the top to the wrap stubs at the bottom.
fn finish_circle(s: &Sweep, (thin, bold): (usize, usize), b: &EnumBound) -> Vec<CircleKrGraph> {
    let tops_thin: Vec<usize> = s.thin();
    let tops_bold: Vec<usize> = s.bold();
    let mut out = Vec::new();
    let thin_wraps: Vec<usize> = (0..thin).collect();
    let bold_wraps: Vec<usize> = (thin..thin + bold).collect();
    for pt in crate::graph::permutations(&thin_wraps) {
        for pb in crate::graph::permutations(&bold_wraps) {
            // wrap matched by each open stub
            let mut target = vec![0usize; s.open.len()];
            for (a, &i) in tops_thin.iter().enumerate() {
                target[i] = pt[a];
            }
            for (a, &i) in tops_bold.iter().enumerate() {
                target[i] = pb[a];
            }
            if let Some(g) = close_circle(s, &target, (thin, bold), b) {
                out.push(g);
            }
        }
    }
    out
}

fn close_circle(s: &Sweep, target: &[usize], (thin, bold): (usize, usize), b: &EnumBound) -> Option<CircleKrGraph> {
    let n = s.kinds.len();
    let ids = interior_ids(&s.kinds);
    let wraps = thin + bold;
    let mut dsu = Dsu::new(2 * bold);

    // consumer of each wrap, and the open stub that passes straight through it
    let mut consumer: Vec<Option<&RawEdge>> = vec![None; wraps];
    for e in &s.edges {
        if let Src::Wrap(j) = e.from {
            consumer[j] = Some(e);
        }
    }
    let mut through: Vec<Option<usize>> = vec![None; wraps];
    for (i, st) in s.open.iter().enumerate() {
        if let Src::Wrap(j) = st.from {
            through[j] = Some(i);
        }
    }
    let wrap_walls = |j: usize| (j >= thin).then(|| (2 * (j - thin), 2 * (j - thin) + 1));

    let mut chains: Vec<(Option<usize>, Option<usize>, Style, Option<(usize, usize)>, u32)> = Vec::new();
    let mut used = vec![false; s.open.len()];
    for (i, st) in s.open.iter().enumerate() {
        let Src::Vertex(a) = st.from else { continue };
        used[i] = true;
        let mut at = i;
        let mut crossings = 0;
        loop {
            let j = target[at];
            crossings += 1;
            if let (Some((x, y)), Some((l, r))) = (s.open[at].walls, wrap_walls(j)) {
                dsu.union(x, l);
                dsu.union(y, r);
            }
            if let Some(e) = consumer[j] {
                chains.push((Some(a), Some(e.to), st.style, st.walls, crossings));
                break;
            }
            at = through[j].expect("an unconsumed wrap stays open");
            used[at] = true;
        }
    }
    for i in 0..s.open.len() {
        if used[i] {
            continue;
        }
        let mut at = i;
        let mut crossings = 0;
        loop {
            used[at] = true;
            let j = target[at];
            crossings += 1;
            if let (Some((x, y)), Some((l, r))) = (s.open[at].walls, wrap_walls(j)) {
                dsu.union(x, l);
                dsu.union(y, r);
            }
            at = through[j].expect("free loops pass every wrap");
            if at == i {
                break;
            }
        }
        chains.push((None, None, s.open[i].style, s.open[i].walls, crossings));
    }
    for e in &s.edges {
        if let Src::Vertex(a) = e.from {
            chains.push((Some(a), Some(e.to), e.style, e.walls, 0));
        }
    }

    // one covering boundary per wall class, numbered by first appearance
    let mut labels: BTreeMap<usize, String> = BTreeMap::new();
    let mut order: Vec<usize> = Vec::new();
    for w in 0..2 * bold {
        let root = dsu.find(w);
        if !order.contains(&root) {
            order.push(root);
        }
    }
    for (i, &root) in order.iter().enumerate() {
        labels.insert(root, format!("w{}", i + 1));
    }
    let vertices: Vec<Vertex> = s
        .kinds
        .iter()
        .enumerate()
        .map(|(r, &kind)| Vertex {
            id: ids[r].clone(),
            kind,
            height: rank_height(r, n),
        })
        .collect();
    let edges: Vec<CircleEdge> = chains
        .into_iter()
        .enumerate()
        .map(|(i, (lo, hi, style, walls, crossings))| CircleEdge {
            id: format!("e{}", i + 1),
            lower: lo.map(|r| ids[r].clone()),
            upper: hi.map(|r| ids[r].clone()),
            style,
            walls: walls.map(|(l, r)| (labels[&dsu.find(l)].clone(), labels[&dsu.find(r)].clone())),
            crossings,
        })
        .collect();

    let mut boundary: Vec<BoundaryComponent> = (1..=s.plain).map(|i| BoundaryComponent::new(&format!("d{i}"), 0)).collect();
    boundary.extend((1..=order.len()).map(|i| BoundaryComponent::new(&format!("w{i}"), 0)));
    if boundary.len() > b.max_boundary {
        return None;
    }
    let probe = CircleKrGraph {
        descriptor: derive_descriptor(SurfaceSig::connected(0, boundary.clone()), &vertices, &edges),
        vertices: vertices.clone(),
        edges: edges.clone(),
    };
    let genus = genus_for(probe.chi(), boundary.len())?;
    if genus > b.max_genus {
        return None;
    }
    let descriptor = derive_descriptor(SurfaceSig::connected(genus, boundary), &vertices, &edges);
    let g = CircleKrGraph {
        descriptor,
        vertices,
        edges,
    };
    g.validate().ok().then_some(g)
}

/// Every descriptor of a connected surface with genus, boundary count,
/// corner total and c0 + c1 + c2 within the limits, valid or not.
/// Boundary circles are labelled `b0`, `b1`, ... in order of
/// nondecreasing k.
pub fn descriptor_candidates(max_c: u32, max_genus: u32, max_boundary: usize, max_corners: u32) -> Vec<RealMorseDescriptor> {
    let mut out = Vec::new();
    for genus in 0..=max_genus {
        for ks in corner_lists(max_boundary, max_corners) {
            let plain = ks.iter().filter(|&&k| k == 0).count();
            let sig = SurfaceSig::connected(
                genus,
                ks.iter().enumerate().map(|(i, &k)| BoundaryComponent::new(&format!("b{i}"), k)).collect(),
            );
            for mask in 0..1u32 << plain {
                let eps: BTreeMap<String, Sign> = (0..plain)
                    .map(|i| (format!("b{i}"), if mask >> i & 1 == 1 { Sign::Plus } else { Sign::Minus }))
                    .collect();
                for total in 0..=max_c {
                    for c0 in 0..=total {
                        for c2 in 0..=total - c0 {
                            out.push(RealMorseDescriptor::new(sig.clone(), [c0, total - c0 - c2, c2], eps.clone()));
                        }
                    }
                }
            }
        }
    }
    out
}

/// The candidates that pass validation.
pub fn enumerate_descriptors(max_c: u32, max_genus: u32, max_boundary: usize, max_corners: u32) -> Vec<RealMorseDescriptor> {
    descriptor_candidates(max_c, max_genus, max_boundary, max_corners)
        .into_iter()
        .filter(|d| validate_real(d).ok())
        .collect()
}

/// Nondecreasing corner lists of length at most `max_len` and sum at most
/// `max_sum`.
fn corner_lists(max_len: usize, max_sum: u32) -> Vec<Vec<u32>> {
    fn rec(cur: &mut Vec<u32>, min: u32, left: u32, max_len: usize, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        if cur.len() == max_len {
            return;
        }
        for k in min..=left {
            cur.push(k);
            rec(cur, k, left - k, max_len, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), 0, max_sum, max_len, &mut out);
    out
}
