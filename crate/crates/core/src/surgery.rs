//! Elementary surgeries on generic graphs and normalization.
//!
//! Every move exchanges the order of two interior vertices that are
//! adjacent in height. When no edge joins them the heights are simply
//! swapped. Otherwise the slab between the level just below the pair and
//! the level just above it is re-decomposed: the edges crossing the bottom
//! and the top of the slab are redistributed over a new lower vertex
//! (the old upper one) and a new upper vertex (the old lower one), joined
//! by at least one link edge. Saddles may change type along the way; leaves
//! and boundary vertices keep theirs. A candidate is kept only when the
//! resulting graph is valid for the same signature.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::canonical;
use crate::error::{Error, Result};
use crate::graph::{check_local, Edge, KrGraph, Slot, Style, VertexKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveFamily {
    ValueSwap,
    LeafSlide,
    SaddleSlide,
    BlockSlide,
    DVertexSlide,
}

impl MoveFamily {
    pub const ALL: [MoveFamily; 5] = [
        MoveFamily::ValueSwap,
        MoveFamily::LeafSlide,
        MoveFamily::SaddleSlide,
        MoveFamily::BlockSlide,
        MoveFamily::DVertexSlide,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveFamily::ValueSwap => "ValueSwap",
            MoveFamily::LeafSlide => "LeafSlide",
            MoveFamily::SaddleSlide => "SaddleSlide",
            MoveFamily::BlockSlide => "BlockSlide",
            MoveFamily::DVertexSlide => "DVertexSlide",
        }
    }
}

impl fmt::Display for MoveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoveFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        MoveFamily::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown move family {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Up,
    Down,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Up => "up",
            Direction::Down => "down",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "up" => Ok(Direction::Up),
            "down" => Ok(Direction::Down),
            _ => Err(format!("unknown direction {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub id: String,
    pub style: Style,
    pub walls: Option<(String, String)>,
}

/// One applicable surgery. `mover` crosses the level of `past` in
/// `direction`; the remaining fields describe the re-decomposed slab and are
/// empty for a value swap.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MoveInstance {
    pub family: MoveFamily,
    pub mover: String,
    pub direction: Direction,
    pub past: String,
    /// New kinds of `mover` and `past`.
    pub kinds: Option<(VertexKind, VertexKind)>,
    /// Slab edges attached to the new lower vertex.
    pub to_lower: Vec<String>,
    pub links: Vec<Link>,
}

impl MoveInstance {
    /// Ids of the vertices that end up lower and upper.
    pub fn lower_upper(&self) -> (&str, &str) {
        match self.direction {
            Direction::Up => (&self.past, &self.mover),
            Direction::Down => (&self.mover, &self.past),
        }
    }
}

impl fmt::Display for MoveInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "move {} {} {} {}", self.family, self.mover, self.direction, self.past)?;
        if let Some((a, b)) = self.kinds {
            write!(f, " kinds={a},{b}")?;
            write!(f, " to-lower={}", self.to_lower.join(","))?;
            let links: Vec<String> = self
                .links
                .iter()
                .map(|l| match &l.walls {
                    Some((wl, wr)) => format!("{}:{}:{}:{}", l.id, l.style, wl, wr),
                    None => format!("{}:{}", l.id, l.style),
                })
                .collect();
            write!(f, " links={}", links.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for MoveInstance {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens.len() < 5 || tokens[0] != "move" {
            return Err("expected `move <family> <mover> <up|down> <past> ...`".into());
        }
        let mut m = MoveInstance {
            family: tokens[1].parse()?,
            mover: tokens[2].to_string(),
            direction: tokens[3].parse()?,
            past: tokens[4].to_string(),
            kinds: None,
            to_lower: Vec::new(),
            links: Vec::new(),
        };
        let list = |v: &str| -> Vec<String> {
            v.split(',').filter(|x| !x.is_empty()).map(str::to_string).collect()
        };
        for tok in &tokens[5..] {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, found {tok:?}"))?;
            match key {
                "kinds" => {
                    let (a, b) = value
                        .split_once(',')
                        .ok_or_else(|| format!("kinds needs two entries, found {value:?}"))?;
                    m.kinds = Some((a.parse()?, b.parse()?));
                }
                "to-lower" => m.to_lower = list(value),
                "links" => {
                    for item in list(value) {
                        let parts: Vec<&str> = item.split(':').collect();
                        let link = match parts.as_slice() {
                            [id, style] => Link {
                                id: id.to_string(),
                                style: style.parse()?,
                                walls: None,
                            },
                            [id, style, l, r] => Link {
                                id: id.to_string(),
                                style: style.parse()?,
                                walls: Some((l.to_string(), r.to_string())),
                            },
                            _ => return Err(format!("malformed link {item:?}")),
                        };
                        m.links.push(link);
                    }
                }
                _ => return Err(format!("unknown move field {key:?}")),
            }
        }
        Ok(m)
    }
}

type Pattern = (usize, usize, usize, usize);

/// Local degree patterns (bold down, thin down, bold up, thin up).
fn patterns(kind: VertexKind) -> &'static [Pattern] {
    use VertexKind::*;
    match kind {
        EMin | DMin | CMin => &[(0, 0, 0, 1)],
        EMax | DMax | CMax => &[(0, 1, 0, 0)],
        TMin => &[(0, 0, 1, 0)],
        TMax => &[(1, 0, 0, 0)],
        S3T => &[(0, 2, 0, 1), (0, 1, 0, 2)],
        S3M => &[(1, 0, 1, 1), (1, 1, 1, 0)],
        S4B => &[(2, 0, 2, 0)],
    }
}

const SADDLES: [VertexKind; 3] = [VertexKind::S3T, VertexKind::S3M, VertexKind::S4B];

fn kind_options(kind: VertexKind) -> Vec<VertexKind> {
    if kind.is_saddle() {
        SADDLES.to_vec()
    } else {
        vec![kind]
    }
}

fn styles(g: &KrGraph, edges: &[usize]) -> (usize, usize) {
    let bold = edges.iter().filter(|&&e| g.edges[e].style == Style::Bold).count();
    (bold, edges.len() - bold)
}

fn require_generic(g: &KrGraph) -> Result<()> {
    let report = g.validate();
    if !report.ok() {
        return Err(Error::InvalidGraph(report));
    }
    if !g.is_generic_unchecked() {
        return Err(Error::NonGeneric("interior heights repeat".into()));
    }
    Ok(())
}

/// All applicable moves paired with their results.
pub(crate) fn candidates(g: &KrGraph) -> Vec<(MoveInstance, KrGraph)> {
    let order = g.interior_by_height();
    let inc = g.incidence();
    let mut out = Vec::new();
    for w in order.windows(2) {
        let (u, v) = (w[0], w[1]);
        let links: Vec<usize> = inc[u].1.iter().copied().filter(|e| inc[v].0.contains(e)).collect();
        if links.is_empty() {
            out.push(value_swap(g, u, v));
        } else {
            restructure(g, u, v, &inc, &links, &mut out);
        }
    }
    out
}

fn mover_of(g: &KrGraph, u: usize, v: usize) -> (usize, usize, Direction) {
    let leafish = |i: usize| !g.vertices[i].kind.is_saddle();
    if leafish(v) && !leafish(u) {
        (v, u, Direction::Down)
    } else {
        (u, v, Direction::Up)
    }
}

fn value_swap(g: &KrGraph, u: usize, v: usize) -> (MoveInstance, KrGraph) {
    let mut h = g.clone();
    let tmp = h.vertices[u].height;
    h.vertices[u].height = h.vertices[v].height;
    h.vertices[v].height = tmp;
    let (mover, past, direction) = mover_of(g, u, v);
    (
        MoveInstance {
            family: MoveFamily::ValueSwap,
            mover: g.vertices[mover].id.clone(),
            direction,
            past: g.vertices[past].id.clone(),
            kinds: None,
            to_lower: Vec::new(),
            links: Vec::new(),
        },
        h,
    )
}

fn fresh_edge_id(g: &KrGraph, base: &str, taken: &[String]) -> String {
    let mut j = 1;
    loop {
        let id = format!("{base}.{j}");
        if !taken.contains(&id) && g.edges.iter().all(|e| e.id != id) {
            return id;
        }
        j += 1;
    }
}

fn restructure(
    g: &KrGraph,
    u: usize,
    v: usize,
    inc: &[(Vec<usize>, Vec<usize>)],
    links: &[usize],
    out: &mut Vec<(MoveInstance, KrGraph)>,
) {
    // interfaces: (edge index, is bottom, original owner)
    let mut interfaces: Vec<(usize, bool, usize)> = Vec::new();
    for &e in &inc[u].0 {
        interfaces.push((e, true, u));
    }
    for &e in inc[v].0.iter().filter(|e| !links.contains(e)) {
        interfaces.push((e, true, v));
    }
    for &e in inc[u].1.iter().filter(|e| !links.contains(e)) {
        interfaces.push((e, false, u));
    }
    for &e in &inc[v].1 {
        interfaces.push((e, false, v));
    }
    let n = interfaces.len();
    let link_ids: Vec<String> = links.iter().map(|&e| g.edges[e].id.clone()).collect();
    let (mover, _, direction) = mover_of(g, u, v);
    let index = g.vertex_index();
    let start = out.len();

    for kv in kind_options(g.vertices[v].kind) {
        for ku in kind_options(g.vertices[u].kind) {
            for mask in 0u32..(1 << n) {
                let lower_side = |i: usize| mask >> i & 1 == 1;
                let pick = |bottom: bool, lower: bool| -> Vec<usize> {
                    (0..n)
                        .filter(|&i| interfaces[i].1 == bottom && lower_side(i) == lower)
                        .map(|i| interfaces[i].0)
                        .collect()
                };
                let (vd, vu, ud, uu) = (pick(true, true), pick(false, true), pick(true, false), pick(false, false));
                let (vdb, vdt) = styles(g, &vd);
                let (vub, vut) = styles(g, &vu);
                let (udb, udt) = styles(g, &ud);
                let (uub, uut) = styles(g, &uu);
                for &pv in patterns(kv) {
                    if pv.0 != vdb || pv.1 != vdt || pv.2 < vub || pv.3 < vut {
                        continue;
                    }
                    let (lb, lt) = (pv.2 - vub, pv.3 - vut);
                    if lb + lt == 0 {
                        continue;
                    }
                    for &pu in patterns(ku) {
                        if pu != (udb + lb, udt + lt, uub, uut) {
                            continue;
                        }
                        for walls in link_walls(g, &vd, lb) {
                            if let Some(found) =
                                build_candidate(g, u, v, (kv, ku), &interfaces, mask, &link_ids, &walls, lt)
                            {
                                let (h, to_lower, new_links) = found;
                                let changed = |i: usize| {
                                    let owner = interfaces[i].2;
                                    (owner == u) != lower_side(i)
                                };
                                if !(0..n).any(changed) {
                                    continue;
                                }
                                let family = family_of(g, &index, u, v, (kv, ku), &interfaces, changed);
                                let (mk, pk) = if mover == u { (ku, kv) } else { (kv, ku) };
                                let (mid, pid) = if mover == u { (u, v) } else { (v, u) };
                                let m = MoveInstance {
                                    family,
                                    mover: g.vertices[mid].id.clone(),
                                    direction,
                                    past: g.vertices[pid].id.clone(),
                                    kinds: Some((mk, pk)),
                                    to_lower,
                                    links: new_links,
                                };
                                if out[start..].iter().all(|(o, _)| *o != m) {
                                    out.push((m, h));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Candidate wall pairs for `count` bold links, drawn from the left and
/// right walls entering the new lower vertex from below.
fn link_walls(g: &KrGraph, lower_down: &[usize], count: usize) -> Vec<Vec<(String, String)>> {
    if count == 0 {
        return vec![Vec::new()];
    }
    let mut lefts = Vec::new();
    let mut rights = Vec::new();
    for &e in lower_down {
        if let Some((l, r)) = &g.edges[e].walls {
            lefts.push(l.clone());
            rights.push(r.clone());
        }
    }
    let mut pairs = Vec::new();
    for l in &lefts {
        for r in &rights {
            pairs.push((l.clone(), r.clone()));
        }
    }
    match count {
        1 => pairs.into_iter().map(|p| vec![p]).collect(),
        2 => {
            let mut out = Vec::new();
            for i in 0..pairs.len() {
                for j in i + 1..pairs.len() {
                    out.push(vec![pairs[i].clone(), pairs[j].clone()]);
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

type Built = (KrGraph, Vec<String>, Vec<Link>);

#[allow(clippy::too_many_arguments)]
fn build_candidate(
    g: &KrGraph,
    u: usize,
    v: usize,
    kinds: (VertexKind, VertexKind),
    interfaces: &[(usize, bool, usize)],
    mask: u32,
    link_ids: &[String],
    bold_walls: &[(String, String)],
    thin_links: usize,
) -> Option<Built> {
    let mut new_links = Vec::new();
    let mut taken = Vec::new();
    let total = bold_walls.len() + thin_links;
    for j in 0..total {
        let id = match link_ids.get(j) {
            Some(id) => id.clone(),
            None => fresh_edge_id(g, &link_ids[0], &taken),
        };
        taken.push(id.clone());
        new_links.push(match bold_walls.get(j) {
            Some(w) => Link {
                id,
                style: Style::Bold,
                walls: Some(w.clone()),
            },
            None => Link {
                id,
                style: Style::Thin,
                walls: None,
            },
        });
    }

    let (uid, vid) = (g.vertices[u].id.clone(), g.vertices[v].id.clone());
    let mut h = g.clone();
    h.vertices[v].kind = kinds.0;
    h.vertices[u].kind = kinds.1;
    let (hu, hv) = (g.vertices[u].height, g.vertices[v].height);
    h.vertices[v].height = hu;
    h.vertices[u].height = hv;
    let mut to_lower = Vec::new();
    for (i, &(e, bottom, _)) in interfaces.iter().enumerate() {
        let target = if mask >> i & 1 == 1 {
            to_lower.push(g.edges[e].id.clone());
            &vid
        } else {
            &uid
        };
        if bottom {
            h.edges[e].upper = target.clone();
        } else {
            h.edges[e].lower = target.clone();
        }
    }
    to_lower.sort();
    h.edges.retain(|e| !(e.lower == uid && e.upper == vid));
    for l in &new_links {
        h.edges.push(Edge {
            id: l.id.clone(),
            lower: vid.clone(),
            upper: uid.clone(),
            style: l.style,
            walls: l.walls.clone(),
        });
    }

    // local rules first: cheap rejection before a full validation
    for who in [&vid, &uid] {
        let down: Vec<Slot<'_>> = h.edges.iter().filter(|e| &e.upper == who).map(Edge::slot).collect();
        let up: Vec<Slot<'_>> = h.edges.iter().filter(|e| &e.lower == who).map(Edge::slot).collect();
        let kind = h.vertex(who)?.kind;
        check_local(kind, &down, &up).ok()?;
    }
    if !h.validate().ok() {
        return None;
    }
    Some((h, to_lower, new_links))
}

fn family_of(
    g: &KrGraph,
    index: &HashMap<&str, usize>,
    u: usize,
    v: usize,
    kinds: (VertexKind, VertexKind),
    interfaces: &[(usize, bool, usize)],
    changed: impl Fn(usize) -> bool,
) -> MoveFamily {
    let blocky = |k: VertexKind| matches!(k, VertexKind::S3M | VertexKind::S4B);
    if [g.vertices[u].kind, g.vertices[v].kind, kinds.0, kinds.1]
        .into_iter()
        .any(blocky)
    {
        return MoveFamily::BlockSlide;
    }
    let mut family = MoveFamily::SaddleSlide;
    for (i, &(e, bottom, _)) in interfaces.iter().enumerate() {
        if !changed(i) {
            continue;
        }
        let far = if bottom { &g.edges[e].lower } else { &g.edges[e].upper };
        match g.vertices[index[far.as_str()]].kind {
            VertexKind::DMin | VertexKind::DMax | VertexKind::CMin | VertexKind::CMax => {
                return MoveFamily::DVertexSlide
            }
            VertexKind::EMin | VertexKind::EMax => family = MoveFamily::LeafSlide,
            _ => {}
        }
    }
    family
}

pub fn applicable_moves(g: &KrGraph) -> Result<Vec<MoveInstance>> {
    require_generic(g)?;
    Ok(candidates(g).into_iter().map(|(m, _)| m).collect())
}

pub fn apply_move(g: &KrGraph, m: &MoveInstance) -> Result<KrGraph> {
    require_generic(g)?;
    candidates(g)
        .into_iter()
        .find(|(c, _)| c == m)
        .map(|(_, h)| h)
        .ok_or_else(|| Error::InapplicableMove(m.to_string()))
}

fn normalized(g: &KrGraph) -> KrGraph {
    let mut g = g.clone();
    g.vertices.sort_by(|a, b| a.id.cmp(&b.id));
    g.edges.sort_by(|a, b| a.id.cmp(&b.id));
    g
}

/// A move on `apply_move(g, m)` leading back to a graph KR-equivalent to
/// `g`; identical to `g` whenever edge ids allow.
pub fn inverse(g: &KrGraph, m: &MoveInstance) -> Result<MoveInstance> {
    let h = apply_move(g, m)?;
    let target = normalized(g);
    let cert = g.certificate_unchecked();
    let (lo, hi) = m.lower_upper();
    let mut fallback = None;
    for (c, r) in candidates(&h) {
        let (clo, chi) = c.lower_upper();
        if (clo, chi) != (hi, lo) {
            continue;
        }
        if normalized(&r) == target {
            return Ok(c);
        }
        if fallback.is_none() && r.certificate_unchecked() == cert {
            fallback = Some(c);
        }
    }
    fallback.ok_or_else(|| Error::InapplicableMove(format!("no inverse for {m}")))
}

/// States explored before giving up.
pub const SEARCH_LIMIT: usize = 200_000;

struct Side {
    nodes: Vec<(KrGraph, usize, Option<MoveInstance>)>,
    seen: HashMap<String, usize>,
    frontier: Vec<usize>,
}

impl Side {
    fn new(g: KrGraph, cert: String) -> Self {
        Side {
            nodes: vec![(g, usize::MAX, None)],
            seen: HashMap::from([(cert, 0)]),
            frontier: vec![0],
        }
    }

    /// Expands one level; returns a certificate also seen by `other`.
    fn expand(&mut self, other: &Side) -> Option<String> {
        let frontier = std::mem::take(&mut self.frontier);
        for at in frontier {
            for (m, h) in candidates(&self.nodes[at].0) {
                let cert = h.certificate_unchecked();
                if self.seen.contains_key(&cert) {
                    continue;
                }
                self.seen.insert(cert.clone(), self.nodes.len());
                self.nodes.push((h, at, Some(m)));
                self.frontier.push(self.nodes.len() - 1);
                if other.seen.contains_key(&cert) {
                    return Some(cert);
                }
            }
        }
        None
    }
}

/// Bidirectional breadth-first search over the move graph, from `g` and
/// from the canonical graph of the same invariants. Returns the reached
/// graph and the moves leading to it from `g`.
pub fn canonicalize(g: &KrGraph) -> Result<(KrGraph, Vec<MoveInstance>)> {
    require_generic(g)?;
    let canon = canonical::canonical_from_invariants(&g.descriptor()?)?;
    let target = canon.certificate_unchecked();
    let start = g.certificate_unchecked();
    if start == target {
        return Ok((g.clone(), Vec::new()));
    }
    let mut fwd = Side::new(g.clone(), start);
    let mut bwd = Side::new(canon, target.clone());
    let stuck = |explored: usize| Error::NormalizationStuck {
        explored,
        graph: crate::text::write_graph(g),
    };
    let meet = loop {
        let explored = fwd.nodes.len() + bwd.nodes.len();
        if explored > SEARCH_LIMIT || fwd.frontier.is_empty() || bwd.frontier.is_empty() {
            return Err(stuck(explored));
        }
        let found = if fwd.frontier.len() <= bwd.frontier.len() {
            fwd.expand(&bwd)
        } else {
            bwd.expand(&fwd)
        };
        if let Some(cert) = found {
            break cert;
        }
    };

    let mut path = Vec::new();
    let mut i = fwd.seen[&meet];
    let mut current = fwd.nodes[i].0.clone();
    while let Some(m) = fwd.nodes[i].2.clone() {
        path.push(m);
        i = fwd.nodes[i].1;
    }
    path.reverse();
    // replay the backward half on the forward copy, matching certificates
    let mut i = bwd.seen[&meet];
    while bwd.nodes[i].1 != usize::MAX {
        i = bwd.nodes[i].1;
        let want = bwd.nodes[i].0.certificate_unchecked();
        let (m, h) = candidates(&current)
            .into_iter()
            .find(|(_, h)| h.certificate_unchecked() == want)
            .ok_or_else(|| stuck(fwd.nodes.len() + bwd.nodes.len()))?;
        path.push(m);
        current = h;
    }
    Ok((current, path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::kr_equivalent;
    use crate::surface::{RealMorseDescriptor, Sign};

    fn pants_graph() -> KrGraph {
        pants([h(1, 5), h(3, 10), h(1, 2), h(4, 5)])
    }

    #[test]
    fn value_swap_on_pants() {
        let g = pants_graph();
        let moves = applicable_moves(&g).unwrap();
        let swaps: Vec<_> = moves.iter().filter(|m| m.family == MoveFamily::ValueSwap).collect();
        assert_eq!(swaps.len(), 1);
        let (lo, hi) = swaps[0].lower_upper();
        assert_eq!((lo, hi), ("b", "a"));
        let h = apply_move(&g, swaps[0]).unwrap();
        assert!(kr_equivalent(&g, &h).unwrap());
        let back = apply_move(&h, &inverse(&g, swaps[0]).unwrap()).unwrap();
        assert_eq!(normalized(&back), normalized(&g));
    }

    #[test]
    fn minimal_disk_has_no_swap() {
        let moves = applicable_moves(&disk()).unwrap();
        assert!(moves.iter().all(|m| m.family != MoveFamily::ValueSwap));
        assert!(moves.is_empty());
    }

    #[test]
    fn two_minima_swap() {
        let mut g = KrGraph::new(sig(0, &[("d", 0)]));
        g.add_vertex("m1", VertexKind::EMin, h(1, 5));
        g.add_vertex("m2", VertexKind::EMin, h(2, 5));
        g.add_vertex("s", VertexKind::S3T, h(3, 5));
        g.add_vertex("d", VertexKind::DMax, h(4, 5));
        g.add_edge(Edge::thin("e1", "m1", "s"));
        g.add_edge(Edge::thin("e2", "m2", "s"));
        g.add_edge(Edge::thin("e3", "s", "d"));
        let moves = applicable_moves(&g).unwrap();
        assert!(moves.iter().any(|m| m.family == MoveFamily::ValueSwap));
    }

    #[test]
    fn leaf_slides_to_the_other_branch() {
        // a min feeding the first of two merges slides onto the second
        let mut g = KrGraph::new(sig(0, &[("a", 0), ("d", 0)]));
        g.add_vertex("a", VertexKind::DMin, h(1, 6));
        g.add_vertex("m", VertexKind::EMin, h(2, 6));
        g.add_vertex("s", VertexKind::S3T, h(3, 6));
        g.add_vertex("t", VertexKind::S3T, h(4, 6));
        g.add_vertex("n", VertexKind::EMin, h(1, 12));
        g.add_vertex("d", VertexKind::DMax, h(5, 6));
        g.add_edge(Edge::thin("e1", "a", "s"));
        g.add_edge(Edge::thin("e2", "m", "s"));
        g.add_edge(Edge::thin("e3", "s", "t"));
        g.add_edge(Edge::thin("e4", "n", "t"));
        g.add_edge(Edge::thin("e5", "t", "d"));
        assert!(g.validate().ok(), "{}", g.validate());
        let moves = applicable_moves(&g).unwrap();
        let slide = moves
            .iter()
            .find(|m| m.family == MoveFamily::LeafSlide)
            .unwrap_or_else(|| panic!("{moves:?}"));
        let h = apply_move(&g, slide).unwrap();
        assert_eq!(h.derived_invariants().unwrap(), g.derived_invariants().unwrap());
        let back = apply_move(&h, &inverse(&g, slide).unwrap()).unwrap();
        assert!(kr_equivalent(&back, &g).unwrap());
    }

    #[test]
    fn move_text_round_trip() {
        let g = canonical::canonical_from_invariants(&RealMorseDescriptor::new(
            sig(0, &[("w", 2)]),
            [1, 2, 0],
            Default::default(),
        ))
        .unwrap();
        for m in applicable_moves(&g).unwrap() {
            let text = m.to_string();
            assert_eq!(text.parse::<MoveInstance>().unwrap(), m, "{text}");
        }
        assert!("move Teleport a up b".parse::<MoveInstance>().is_err());
    }

    #[test]
    fn inapplicable_move_is_reported() {
        let m: MoveInstance = "move ValueSwap a up c".parse().unwrap();
        assert!(matches!(
            apply_move(&pants_graph(), &m),
            Err(Error::InapplicableMove(_))
        ));
    }

    #[test]
    fn canonicalize_examples() {
        let d = RealMorseDescriptor::new(
            sig(0, &[("a", 0), ("b", 0), ("c", 0)]),
            [0, 1, 0],
            [("a", Sign::Minus), ("b", Sign::Minus), ("c", Sign::Plus)]
                .into_iter()
                .map(|(l, s)| (l.to_string(), s))
                .collect(),
        );
        let canon = canonical::canonical_from_invariants(&d).unwrap();
        let (same, moves) = canonicalize(&canon).unwrap();
        assert!(moves.is_empty());
        assert_eq!(same, canon);

        let (c, _) = canonicalize(&pants_graph()).unwrap();
        assert!(canonical::is_canonical(&c).unwrap());

        // torus with one plain hole, cycle placed below the merge of the min
        let mut g = KrGraph::new(sig(1, &[("d", 0)]));
        g.add_vertex("m", VertexKind::EMin, h(1, 8));
        g.add_vertex("s1", VertexKind::S3T, h(2, 8));
        g.add_vertex("n", VertexKind::EMin, h(3, 8));
        g.add_vertex("s2", VertexKind::S3T, h(4, 8));
        g.add_vertex("s3", VertexKind::S3T, h(5, 8));
        g.add_vertex("d", VertexKind::DMax, h(7, 8));
        g.add_edge(Edge::thin("e1", "m", "s1"));
        g.add_edge(Edge::thin("e2", "s1", "s2"));
        g.add_edge(Edge::thin("e3", "s1", "s2"));
        g.add_edge(Edge::thin("e4", "s2", "s3"));
        g.add_edge(Edge::thin("e5", "n", "s3"));
        g.add_edge(Edge::thin("e6", "s3", "d"));
        assert!(g.validate().ok(), "{}", g.validate());
        let (c, moves) = canonicalize(&g).unwrap();
        assert!(!moves.is_empty());
        assert!(canonical::is_canonical(&c).unwrap());
        let mut replay = g.clone();
        for m in &moves {
            replay = apply_move(&replay, m).unwrap();
        }
        assert_eq!(replay, c);
    }
}
