//! Circle-valued graphs, regular values, and cut/glue along a level.
//!
//! Heights live in `[0,1)` standing for `R/Z`. An edge rises from its
//! lower end through `crossings` passes of the base point 0 to its upper
//! end; the total rise is `h(upper) - h(lower) + crossings > 0`. An edge
//! without endpoints is a free loop (a fibred annulus or torus) rising by
//! `crossings`.
//!
//! Wall ids of bold edges are the labels of the covering boundary circles.
//! Left walls carry positive degrees and right walls negative ones.
//! Ids may not contain `~`, which marks segments produced by cutting.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{check_local, permutations, Edge, KrGraph, Slot, Style, Vertex, VertexKind};
use crate::surface::{
    self, BoundaryBehavior, BoundaryComponent, CircleMorseDescriptor, Sign, SurfaceSig,
    ValidationReport,
};
use crate::Height;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CircleEdge {
    pub id: String,
    pub lower: Option<String>,
    pub upper: Option<String>,
    pub style: Style,
    pub walls: Option<(String, String)>,
    pub crossings: u32,
}

impl CircleEdge {
    pub fn thin(id: &str, lower: &str, upper: &str, crossings: u32) -> Self {
        Self {
            id: id.into(),
            lower: Some(lower.into()),
            upper: Some(upper.into()),
            style: Style::Thin,
            walls: None,
            crossings,
        }
    }

    pub fn bold(id: &str, lower: &str, upper: &str, walls: (&str, &str), crossings: u32) -> Self {
        Self {
            id: id.into(),
            lower: Some(lower.into()),
            upper: Some(upper.into()),
            style: Style::Bold,
            walls: Some((walls.0.into(), walls.1.into())),
            crossings,
        }
    }

    pub fn free_loop(id: &str, walls: Option<(&str, &str)>, crossings: u32) -> Self {
        Self {
            id: id.into(),
            lower: None,
            upper: None,
            style: if walls.is_some() { Style::Bold } else { Style::Thin },
            walls: walls.map(|(l, r)| (l.into(), r.into())),
            crossings,
        }
    }

    pub fn is_free_loop(&self) -> bool {
        self.lower.is_none() && self.upper.is_none()
    }

    fn slot(&self) -> Slot<'_> {
        Slot {
            style: self.style,
            walls: self.walls.as_ref().map(|(l, r)| (l.as_str(), r.as_str())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleKrGraph {
    pub descriptor: CircleMorseDescriptor,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<CircleEdge>,
}

pub(crate) fn frac(x: Height) -> Height {
    x - x.floor()
}

const ALLOWED: [VertexKind; 7] = [
    VertexKind::EMin,
    VertexKind::EMax,
    VertexKind::DMin,
    VertexKind::DMax,
    VertexKind::S3T,
    VertexKind::S3M,
    VertexKind::S4B,
];

pub(crate) struct Dsu(pub(crate) Vec<usize>);

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a.max(b)] = a.min(b);
    }
}

impl CircleKrGraph {
    fn index(&self) -> HashMap<&str, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect()
    }

    fn height_of(&self, id: &str) -> Height {
        self.vertices.iter().find(|v| v.id == id).map_or(Height::zero(), |v| v.height)
    }

    /// Total rise of an edge in the universal cover.
    pub fn rise(&self, e: &CircleEdge) -> Height {
        match (&e.lower, &e.upper) {
            (Some(l), Some(u)) => self.height_of(u) - self.height_of(l) + Height::from(i64::from(e.crossings)),
            _ => Height::from(i64::from(e.crossings)),
        }
    }

    pub(crate) fn chi(&self) -> i64 {
        let vertex_part: i64 = self
            .vertices
            .iter()
            .map(|v| match v.kind {
                VertexKind::EMin | VertexKind::EMax | VertexKind::S4B => 1,
                VertexKind::S3T => -1,
                _ => 0,
            })
            .sum();
        let bold = self
            .edges
            .iter()
            .filter(|e| e.style == Style::Bold && !e.is_free_loop())
            .count() as i64;
        vertex_part - bold
    }

    fn components(&self) -> usize {
        let index = self.index();
        let mut dsu = Dsu((0..self.vertices.len()).collect());
        let mut loops = 0;
        for e in &self.edges {
            match (&e.lower, &e.upper) {
                (Some(l), Some(u)) => {
                    if let (Some(&a), Some(&b)) = (index.get(l.as_str()), index.get(u.as_str())) {
                        dsu.union(a, b);
                    }
                }
                _ => loops += 1,
            }
        }
        (0..self.vertices.len()).filter(|&i| dsu.find(i) == i).count() + loops
    }

    /// Whether heights lift to the real line consistently with all rises.
    fn has_global_lift(&self) -> bool {
        let index = self.index();
        let mut lift: Vec<Option<Height>> = vec![None; self.vertices.len()];
        let mut adj: Vec<Vec<(usize, Height)>> = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            if let (Some(l), Some(u)) = (&e.lower, &e.upper) {
                let (a, b) = (index[l.as_str()], index[u.as_str()]);
                let r = self.rise(e);
                adj[a].push((b, r));
                adj[b].push((a, -r));
            } else if e.crossings != 0 {
                return false;
            }
        }
        for s in 0..self.vertices.len() {
            if lift[s].is_some() {
                continue;
            }
            lift[s] = Some(self.vertices[s].height);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                let hx = lift[x].expect("visited");
                for &(y, r) in &adj[x] {
                    match lift[y] {
                        None => {
                            lift[y] = Some(hx + r);
                            stack.push(y);
                        }
                        Some(hy) if hy != hx + r => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Follows the chain of bold edges carrying `wall`, starting from the
    /// edge with the smallest id; `None` if it does not close up or misses
    /// some edge carrying the wall.
    fn wall_chain(&self, wall: &str) -> Option<Vec<usize>> {
        let carrying: Vec<usize> = (0..self.edges.len())
            .filter(|&i| {
                self.edges[i]
                    .walls
                    .as_ref()
                    .is_some_and(|(l, r)| l == wall || r == wall)
            })
            .collect();
        let first = *carrying.iter().min_by_key(|&&i| &self.edges[i].id)?;
        let mut chain = vec![first];
        let mut cur = first;
        loop {
            let next = match &self.edges[cur].upper {
                None => cur,
                Some(top) => *carrying
                    .iter()
                    .find(|&&i| self.edges[i].lower.as_deref() == Some(top.as_str()))?,
            };
            if next == first {
                break;
            }
            if chain.contains(&next) {
                return None;
            }
            chain.push(next);
            cur = next;
        }
        (chain.len() == carrying.len()).then_some(chain)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = surface::validate_circle(&self.descriptor);
        if self.vertices.is_empty() && self.edges.is_empty() {
            report.push("G0", "the graph is empty");
            return report;
        }
        let mut ids = BTreeSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id.as_str()) {
                report.push("G0", format!("duplicate vertex id {}", v.id));
            }
            if !ALLOWED.contains(&v.kind) {
                report.push("K1", format!("{} {} cannot occur in a circle-valued graph", v.kind, v.id));
            }
            if v.height < Height::zero() || v.height >= Height::one() {
                report.push("K2", format!("height of {} must lie in [0,1)", v.id));
            }
        }
        let mut eids = BTreeSet::new();
        for e in &self.edges {
            if !eids.insert(e.id.as_str()) {
                report.push("G0", format!("duplicate edge id {}", e.id));
            }
        }
        let all_ids = self
            .vertices
            .iter()
            .map(|v| v.id.as_str())
            .chain(self.edges.iter().map(|e| e.id.as_str()));
        for id in all_ids {
            if id.contains('~') {
                report.push("G0", format!("id {id} uses the reserved character ~"));
            }
        }
        let index = self.index();
        for e in &self.edges {
            match (&e.lower, &e.upper) {
                (Some(l), Some(u)) => {
                    for end in [l, u] {
                        if !index.contains_key(end.as_str()) {
                            report.push("G0", format!("edge {} refers to unknown vertex {end}", e.id));
                        }
                    }
                }
                (None, None) => {}
                _ => report.push("K3", format!("edge {} has exactly one endpoint", e.id)),
            }
            match (e.style, &e.walls) {
                (Style::Thin, Some(_)) => report.push("G3", format!("thin edge {} carries walls", e.id)),
                (Style::Bold, None) => report.push("G3", format!("bold edge {} has no walls", e.id)),
                (Style::Bold, Some((l, r))) if l == r => {
                    report.push("G3", format!("bold edge {} has equal walls", e.id))
                }
                _ => {}
            }
        }
        if !report.ok() {
            return report;
        }
        for e in &self.edges {
            if self.rise(e) <= Height::zero() {
                report.push("K3", format!("edge {} does not rise", e.id));
            }
        }
        for (vi, v) in self.vertices.iter().enumerate() {
            let down: Vec<Slot<'_>> = self
                .edges
                .iter()
                .filter(|e| e.upper.as_deref().and_then(|u| index.get(u)) == Some(&vi))
                .map(CircleEdge::slot)
                .collect();
            let up: Vec<Slot<'_>> = self
                .edges
                .iter()
                .filter(|e| e.lower.as_deref().and_then(|l| index.get(l)) == Some(&vi))
                .map(CircleEdge::slot)
                .collect();
            if let Err(msg) = check_local(v.kind, &down, &up) {
                report.push("G4", format!("{}: {msg}", v.id));
            }
        }
        if !report.ok() {
            return report;
        }

        let mut lefts = BTreeSet::new();
        let mut rights = BTreeSet::new();
        for (l, r) in self.edges.iter().filter_map(|e| e.walls.as_ref()) {
            lefts.insert(l.as_str());
            rights.insert(r.as_str());
        }
        if let Some(w) = lefts.intersection(&rights).next() {
            report.push("G5", format!("wall {w} is used on both sides"));
        }
        let walls: BTreeSet<&str> = lefts.union(&rights).copied().collect();
        for &w in &walls {
            match self.wall_chain(w) {
                None => report.push("G5", format!("wall {w} does not close into one circle")),
                Some(chain) => {
                    let total: i64 = chain.iter().map(|&i| i64::from(self.edges[i].crossings)).sum();
                    match self.descriptor.behavior.get(w) {
                        Some(BoundaryBehavior::Covering(d)) if d.abs() == total => {}
                        Some(BoundaryBehavior::Covering(d)) => report.push(
                            "W2",
                            format!("wall {w} winds {total} times, descriptor degree is {d}"),
                        ),
                        _ => report.push("G7", format!("wall {w} is not a covering boundary label")),
                    }
                }
            }
        }
        for (label, b) in &self.descriptor.behavior {
            match b {
                BoundaryBehavior::Covering(_) if !walls.contains(label.as_str()) => {
                    report.push("G7", format!("covering boundary {label} has no wall"))
                }
                BoundaryBehavior::Constant(s) => {
                    let expected = match s {
                        Sign::Minus => VertexKind::DMin,
                        Sign::Plus => VertexKind::DMax,
                    };
                    match self.vertices.iter().find(|v| &v.id == label) {
                        Some(v) if v.kind == expected => {}
                        _ => report.push("G7", format!("constant boundary {label} needs a {expected} vertex")),
                    }
                }
                _ => {}
            }
        }
        for v in &self.vertices {
            if v.kind.is_plain_boundary() && !self.descriptor.behavior.contains_key(&v.id) {
                report.push("G7", format!("{} {} is not a boundary label", v.kind, v.id));
            }
        }

        let c = self.critical_counts();
        if c != self.descriptor.c {
            report.push("C1", format!("graph has c = {c:?}, descriptor {:?}", self.descriptor.c));
        }
        let chi = self.chi();
        let expected = surface::euler_characteristic(&self.descriptor.sig);
        if chi != expected {
            report.push("G8", format!("pieces give chi = {chi}, signature gives {expected}"));
        }
        let comps = self.components();
        if comps != self.descriptor.sig.components as usize {
            report.push("G9", format!("{comps} connected components, signature declares {}", self.descriptor.sig.components));
        }
        let null = self.descriptor.class_vector().iter().all(|&x| x == 0);
        if null != (walls.is_empty() && self.has_global_lift()) {
            report.push(
                "W1",
                if null {
                    "class vector vanishes but the graph does not lift to the real line"
                } else {
                    "class vector is nonzero but the graph lifts to the real line"
                },
            );
        }
        report
    }

    pub fn critical_counts(&self) -> [u32; 3] {
        let count = |k: VertexKind| self.vertices.iter().filter(|v| v.kind == k).count() as u32;
        [
            count(VertexKind::EMin),
            self.vertices.iter().filter(|v| v.kind.is_saddle()).count() as u32,
            count(VertexKind::EMax),
        ]
    }

    pub fn euler_from_pieces(&self) -> Result<i64> {
        let report = self.validate();
        if !report.ok() {
            return Err(Error::InvalidGraph(report));
        }
        Ok(self.chi())
    }

    /// Crossing totals per wall.
    pub fn wall_windings(&self) -> BTreeMap<String, i64> {
        let mut out = BTreeMap::new();
        for e in &self.edges {
            if let Some((l, r)) = &e.walls {
                *out.entry(l.clone()).or_insert(0) += i64::from(e.crossings);
                *out.entry(r.clone()).or_insert(0) -= i64::from(e.crossings);
            }
        }
        out
    }

    fn is_generic(&self) -> bool {
        let mut hs: Vec<Height> = self.vertices.iter().map(|v| v.height).collect();
        hs.sort();
        hs.windows(2).all(|w| w[0] != w[1])
    }

    /// Certificate up to order-preserving rotations of the circle; requires
    /// distinct heights.
    pub fn certificate(&self) -> Result<String> {
        if !self.is_generic() {
            return Err(Error::NonGeneric("vertex heights repeat".into()));
        }
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| self.vertices[a].height.cmp(&self.vertices[b].height));
        let m = order.len();
        let mut pos = vec![0usize; m];
        for (r, &vi) in order.iter().enumerate() {
            pos[vi] = r;
        }
        let index = self.index();
        let heights: Vec<Height> = order.iter().map(|&i| self.vertices[i].height).collect();
        // levels passed in (h(lo), h(lo) + rise], counted over all lifts
        let rank_rise = |e: &CircleEdge| -> i64 {
            let lo = e.lower.as_deref().map(|l| self.vertices[index[l]].height);
            match lo {
                None => i64::from(e.crossings),
                Some(a) => {
                    let top = a + self.rise(e);
                    heights
                        .iter()
                        .map(|&x| {
                            // number of integers t with a < x + t <= top
                            let low = (a - x).floor().to_integer() + 1;
                            let high = (top - x).floor().to_integer();
                            (high - low + 1).max(0)
                        })
                        .sum()
                }
            }
        };
        let rises: Vec<i64> = self.edges.iter().map(rank_rise).collect();
        let mut best: Option<String> = None;
        for s in 0..m.max(1) {
            let rank = |vi: usize| (pos[vi] + m - s) % m.max(1);
            let mut head: String = (0..m)
                .map(|r| self.vertices[order[(r + s) % m]].kind.name())
                .collect::<Vec<_>>()
                .join(",");
            head.push('|');
            let mut groups: BTreeMap<(i64, i64, i64, Style), Vec<usize>> = BTreeMap::new();
            for (ei, e) in self.edges.iter().enumerate() {
                let lo = e.lower.as_deref().map_or(-1, |l| rank(index[l]) as i64);
                let hi = e.upper.as_deref().map_or(-1, |u| rank(index[u]) as i64);
                groups.entry((lo, hi, rises[ei], e.style)).or_default().push(ei);
            }
            let keys: Vec<_> = groups.keys().copied().collect();
            let orders: Vec<Vec<Vec<usize>>> = keys
                .iter()
                .map(|k| {
                    if k.3 == Style::Bold && groups[k].len() > 1 {
                        permutations(&groups[k])
                    } else {
                        vec![groups[k].clone()]
                    }
                })
                .collect();
            let mut choice = vec![0usize; keys.len()];
            'outer: loop {
                let mut relabel: HashMap<&str, usize> = HashMap::new();
                let mut text = head.clone();
                for (gi, k) in keys.iter().enumerate() {
                    for &ei in &orders[gi][choice[gi]] {
                        text.push_str(&format!("{}>{}+{}{};", k.0, k.1, k.2, self.edges[ei].style));
                        if let Some((l, r)) = &self.edges[ei].walls {
                            let n = relabel.len();
                            let li = *relabel.entry(l.as_str()).or_insert(n);
                            let n = relabel.len();
                            let ri = *relabel.entry(r.as_str()).or_insert(n);
                            text.push_str(&format!("({li},{ri})"));
                        }
                    }
                }
                if best.as_ref().is_none_or(|b| text < *b) {
                    best = Some(text);
                }
                let mut gi = 0;
                loop {
                    if gi == keys.len() {
                        break 'outer;
                    }
                    choice[gi] += 1;
                    if choice[gi] < orders[gi].len() {
                        break;
                    }
                    choice[gi] = 0;
                    gi += 1;
                }
            }
        }
        Ok(best.unwrap_or_default())
    }
}

/// Equivalence of circle graphs with the same descriptor, up to
/// order-preserving reparametrization of the circle.
pub fn circle_equivalent(g: &CircleKrGraph, h: &CircleKrGraph) -> Result<bool> {
    for x in [g, h] {
        let report = x.validate();
        if !report.ok() {
            return Err(Error::InvalidGraph(report));
        }
    }
    Ok(g.descriptor == h.descriptor && g.certificate()? == h.certificate()?)
}

/// The descriptor realized by a circle graph. Constant boundaries come from
/// `D` vertices, covering degrees from wall windings, genus windings from
/// the net rise around fundamental cycles (in order of discovery, padded
/// with zeros to `2 * genus`).
pub fn derive_descriptor(sig: SurfaceSig, vertices: &[Vertex], edges: &[CircleEdge]) -> CircleMorseDescriptor {
    let probe = CircleKrGraph {
        descriptor: CircleMorseDescriptor {
            sig: sig.clone(),
            c: [0; 3],
            behavior: BTreeMap::new(),
            windings: Vec::new(),
        },
        vertices: vertices.to_vec(),
        edges: edges.to_vec(),
    };
    let mut behavior = BTreeMap::new();
    for v in vertices {
        if let Some(s) = v.kind.boundary_sign() {
            behavior.insert(v.id.clone(), BoundaryBehavior::Constant(s));
        }
    }
    for (w, d) in probe.wall_windings() {
        behavior.insert(w, BoundaryBehavior::Covering(d));
    }

    let index = probe.index();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| edges[a].id.cmp(&edges[b].id));
    let mut lift: Vec<Option<Height>> = vec![None; vertices.len()];
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices.len()];
    let mut turns = Vec::new();
    for &ei in &order {
        let e = &edges[ei];
        match (&e.lower, &e.upper) {
            (Some(l), Some(u)) => {
                let (a, b) = (index[l.as_str()], index[u.as_str()]);
                adj[a].push((b, ei));
                adj[b].push((a, ei));
            }
            _ if e.style == Style::Thin => turns.push(i64::from(e.crossings)),
            _ => {}
        }
    }
    let mut tree_edges = HashSet::new();
    for s in 0..vertices.len() {
        if lift[s].is_some() {
            continue;
        }
        lift[s] = Some(vertices[s].height);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &(y, ei) in &adj[x] {
                if lift[y].is_none() {
                    let e = &edges[ei];
                    let r = probe.rise(e);
                    let hx = lift[x].expect("visited");
                    lift[y] = Some(if index[e.lower.as_deref().unwrap_or("")] == x { hx + r } else { hx - r });
                    tree_edges.insert(ei);
                    queue.push_back(y);
                }
            }
        }
    }
    for &ei in &order {
        let e = &edges[ei];
        if tree_edges.contains(&ei) || e.walls.is_some() {
            continue;
        }
        if let (Some(l), Some(u)) = (&e.lower, &e.upper) {
            let (a, b) = (index[l.as_str()], index[u.as_str()]);
            let gap = lift[a].expect("lifted") + probe.rise(e) - lift[b].expect("lifted");
            turns.push(gap.to_integer());
        }
    }
    let mut windings = vec![0i64; 2 * sig.genus as usize];
    for (slot, t) in windings.iter_mut().zip(turns) {
        *slot = t;
    }
    CircleMorseDescriptor {
        c: probe.critical_counts(),
        sig,
        behavior,
        windings,
    }
}

/// An open arc of regular values, running up from `from` to `to`
/// (cyclically). `Whole` is the entire circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegularArc {
    Whole,
    Arc { from: Height, to: Height },
}

impl RegularArc {
    pub fn midpoint(&self) -> Height {
        match *self {
            RegularArc::Whole => Height::zero(),
            RegularArc::Arc { from, to } => {
                let to = if to <= from { to + Height::one() } else { to };
                frac((from + to) / Height::from(2))
            }
        }
    }
}

pub fn regular_values(g: &CircleKrGraph) -> Vec<RegularArc> {
    let hs: BTreeSet<Height> = g.vertices.iter().map(|v| v.height).collect();
    let hs: Vec<Height> = hs.into_iter().collect();
    if hs.is_empty() {
        return vec![RegularArc::Whole];
    }
    (0..hs.len())
        .map(|i| RegularArc::Arc {
            from: hs[i],
            to: hs[(i + 1) % hs.len()],
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    pub at: Height,
    pub descriptor: CircleMorseDescriptor,
    pub pieces: Vec<KrGraph>,
    /// (terminal at level 1, terminal at level 0) glued to each other.
    pub pairs: Vec<(String, String)>,
}

impl CutResult {
    pub fn bold_cuts(&self) -> usize {
        self.pieces
            .iter()
            .flat_map(|p| &p.vertices)
            .filter(|v| v.kind == VertexKind::TMax)
            .count()
    }
}

fn strip(id: &str) -> &str {
    id.split('~').next().unwrap_or(id)
}

pub fn cut(g: &CircleKrGraph, v: Height) -> Result<CutResult> {
    let report = g.validate();
    if !report.ok() {
        return Err(Error::InvalidGraph(report));
    }
    let v = frac(v);
    if g.vertices.iter().any(|x| x.height == v) {
        return Err(Error::ExceptionalValue(format!("{v}")));
    }
    let shifted = |h: Height| frac(h - v);
    let index = g.index();

    // crossings of each edge in the cut frame
    let cuts: Vec<u32> = g
        .edges
        .iter()
        .map(|e| match (&e.lower, &e.upper) {
            (Some(l), Some(u)) => {
                let a = shifted(g.vertices[index[l.as_str()]].height);
                let b = shifted(g.vertices[index[u.as_str()]].height);
                (g.rise(e) - (b - a)).to_integer() as u32
            }
            _ => e.crossings,
        })
        .collect();

    // wall segment numbering along each wall chain
    let mut wall_base: HashMap<(usize, String), (u32, u32)> = HashMap::new();
    let wall_names: BTreeSet<String> = g
        .edges
        .iter()
        .filter_map(|e| e.walls.as_ref())
        .flat_map(|(l, r)| [l.clone(), r.clone()])
        .collect();
    for w in &wall_names {
        let chain = g.wall_chain(w).expect("validated wall");
        let total: u32 = chain.iter().map(|&i| cuts[i]).sum();
        let mut before = 0;
        for &i in &chain {
            wall_base.insert((i, w.clone()), (before, total));
            before += cuts[i];
        }
    }
    let wall_segment = |ei: usize, w: &str, j: u32| -> String {
        let (before, total) = wall_base[&(ei, w.to_string())];
        format!("{w}~{}", (before + j + total - 1) % total + 1)
    };

    let mut vertices: Vec<Vertex> = g
        .vertices
        .iter()
        .map(|x| Vertex {
            id: x.id.clone(),
            kind: x.kind,
            height: shifted(x.height),
        })
        .collect();
    let mut edges = Vec::new();
    let mut pairs = Vec::new();
    for (ei, e) in g.edges.iter().enumerate() {
        let c = cuts[ei];
        let bold = e.style == Style::Bold;
        let seg_walls = |j: u32| {
            e.walls
                .as_ref()
                .map(|(l, r)| (wall_segment(ei, l, j), wall_segment(ei, r, j)))
        };
        if c == 0 {
            edges.push(Edge {
                id: e.id.clone(),
                lower: e.lower.clone().expect("rising edge"),
                upper: e.upper.clone().expect("rising edge"),
                style: e.style,
                walls: seg_walls(0),
            });
            continue;
        }
        for i in 1..=c {
            let (top, bottom) = (format!("{}~{i}+", e.id), format!("{}~{i}-", e.id));
            let (tk, bk) = if bold {
                (VertexKind::TMax, VertexKind::TMin)
            } else {
                (VertexKind::CMax, VertexKind::CMin)
            };
            vertices.push(Vertex {
                id: top.clone(),
                kind: tk,
                height: Height::one(),
            });
            vertices.push(Vertex {
                id: bottom.clone(),
                kind: bk,
                height: Height::zero(),
            });
            pairs.push((top, bottom));
        }
        let segments: Vec<u32> = if e.is_free_loop() { (1..=c).collect() } else { (0..=c).collect() };
        for j in segments {
            let lower = if j == 0 {
                e.lower.clone().expect("open edge")
            } else {
                format!("{}~{j}-", e.id)
            };
            let upper = if j == c && !e.is_free_loop() {
                e.upper.clone().expect("open edge")
            } else {
                format!("{}~{}+", e.id, j % c + 1)
            };
            edges.push(Edge {
                id: format!("{}~{j}", e.id),
                lower,
                upper,
                style: e.style,
                walls: seg_walls(j),
            });
        }
    }

    // split into connected pieces
    let vidx: HashMap<String, usize> = vertices.iter().enumerate().map(|(i, x)| (x.id.clone(), i)).collect();
    let mut dsu = Dsu((0..vertices.len()).collect());
    for e in &edges {
        dsu.union(vidx[&e.lower], vidx[&e.upper]);
    }
    let mut groups: BTreeMap<usize, (Vec<Vertex>, Vec<Edge>)> = BTreeMap::new();
    for (i, x) in vertices.iter().enumerate() {
        let r = dsu.find(i);
        groups.entry(r).or_default().0.push(x.clone());
    }
    for e in &edges {
        let r = dsu.find(vidx[&e.lower]);
        groups.get_mut(&r).expect("piece").1.push(e.clone());
    }
    let mut pieces = Vec::new();
    for (_, (mut vs, mut es)) in groups {
        vs.sort_by(|a, b| a.height.cmp(&b.height).then_with(|| a.id.cmp(&b.id)));
        es.sort_by(|a, b| a.id.cmp(&b.id));
        let mut piece = KrGraph {
            sig: SurfaceSig::connected(0, Vec::new()),
            vertices: vs,
            edges: es,
        };
        piece.sig = piece_signature(&piece)?;
        pieces.push(piece);
    }
    pieces.sort_by(|a, b| {
        let key = |p: &KrGraph| p.vertices.iter().map(|x| x.id.clone()).min();
        key(a).cmp(&key(b))
    });
    Ok(CutResult {
        at: v,
        descriptor: g.descriptor.clone(),
        pieces,
        pairs,
    })
}

/// Signature of a connected piece read off its own structure.
fn piece_signature(p: &KrGraph) -> Result<SurfaceSig> {
    let circles = p.boundary_trace()?;
    let boundary: Vec<BoundaryComponent> = circles
        .iter()
        .map(|c| match &c.label {
            Some(l) => BoundaryComponent::new(l.clone(), 0),
            None => BoundaryComponent::new(c.walls[0].clone(), c.k),
        })
        .collect();
    let vertex_part: i64 = p
        .vertices
        .iter()
        .map(|v| match v.kind {
            VertexKind::EMin | VertexKind::EMax | VertexKind::TMin | VertexKind::TMax | VertexKind::S4B => 1,
            VertexKind::S3T => -1,
            _ => 0,
        })
        .sum();
    let chi = vertex_part - p.edges.iter().filter(|e| e.style == Style::Bold).count() as i64;
    let twice_genus = 2 - chi - boundary.len() as i64;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(Error::InvalidGraph(ValidationReport {
            violations: vec![surface::Violation {
                rule: "G8".into(),
                detail: format!("piece has chi = {chi} with {} boundary circles", boundary.len()),
            }],
        }));
    }
    let mut boundary = boundary;
    boundary.sort();
    Ok(SurfaceSig::connected((twice_genus / 2) as u32, boundary))
}

pub fn glue(r: &CutResult) -> Result<CircleKrGraph> {
    let mismatch = |m: String| Error::GluingMismatch(m);
    let all_vertices: Vec<&Vertex> = r.pieces.iter().flat_map(|p| &p.vertices).collect();
    let kind_of: HashMap<&str, VertexKind> = all_vertices.iter().map(|v| (v.id.as_str(), v.kind)).collect();
    let mut up_to_down: HashMap<&str, &str> = HashMap::new();
    let mut used = HashSet::new();
    for (top, bottom) in &r.pairs {
        let (tk, bk) = (kind_of.get(top.as_str()), kind_of.get(bottom.as_str()));
        match (tk, bk) {
            (Some(VertexKind::TMax), Some(VertexKind::TMin)) | (Some(VertexKind::CMax), Some(VertexKind::CMin)) => {}
            _ => return Err(mismatch(format!("cannot glue {top} ({tk:?}) to {bottom} ({bk:?})"))),
        }
        if !used.insert(top.as_str()) || !used.insert(bottom.as_str()) {
            return Err(mismatch(format!("terminal glued twice in pair {top} {bottom}")));
        }
        up_to_down.insert(top, bottom);
    }
    for v in &all_vertices {
        if v.kind.is_pinned() && !used.contains(v.id.as_str()) {
            return Err(mismatch(format!("terminal {} is not paired", v.id)));
        }
    }

    let all_edges: Vec<&Edge> = r.pieces.iter().flat_map(|p| &p.edges).collect();
    let starting_at: HashMap<&str, usize> = all_edges.iter().enumerate().map(|(i, e)| (e.lower.as_str(), i)).collect();
    let is_terminal = |id: &str| kind_of.get(id).is_some_and(|k| k.is_pinned());
    let height: HashMap<&str, Height> = all_vertices.iter().map(|v| (v.id.as_str(), v.height)).collect();
    let at = r.at;
    let unshift = |h: Height| frac(h + at);

    let mut visited = vec![false; all_edges.len()];
    let mut edges = Vec::new();
    let follow = |start: usize, visited: &mut Vec<bool>| -> Result<(usize, usize, u32, Option<(String, String)>)> {
        let mut cur = start;
        let mut passes = 0;
        let walls = all_edges[start].walls.as_ref().map(|(l, r)| (strip(l).to_string(), strip(r).to_string()));
        loop {
            visited[cur] = true;
            let e = all_edges[cur];
            let w = e.walls.as_ref().map(|(l, r)| (strip(l).to_string(), strip(r).to_string()));
            if w != walls {
                return Err(mismatch(format!("walls change along glued edge {}", strip(&e.id))));
            }
            if !is_terminal(&e.upper) {
                return Ok((start, cur, passes, walls));
            }
            let bottom = up_to_down[e.upper.as_str()];
            passes += 1;
            let next = *starting_at
                .get(bottom)
                .ok_or_else(|| mismatch(format!("nothing leaves {bottom}")))?;
            if next == start {
                return Ok((start, usize::MAX, passes, walls));
            }
            if visited[next] {
                return Err(mismatch(format!("segment {} is reached twice", all_edges[next].id)));
            }
            cur = next;
        }
    };
    for i in 0..all_edges.len() {
        if visited[i] || is_terminal(&all_edges[i].lower) {
            continue;
        }
        let (s, t, passes, walls) = follow(i, &mut visited)?;
        let (lo, hi) = (all_edges[s].lower.as_str(), all_edges[t].upper.as_str());
        let rise = height[hi] - height[lo] + Height::from(i64::from(passes));
        let c = rise - (unshift(height[hi]) - unshift(height[lo]));
        edges.push(CircleEdge {
            id: strip(&all_edges[s].id).to_string(),
            lower: Some(lo.to_string()),
            upper: Some(hi.to_string()),
            style: all_edges[s].style,
            walls,
            crossings: c.to_integer() as u32,
        });
    }
    for i in 0..all_edges.len() {
        if visited[i] {
            continue;
        }
        let (s, _, passes, walls) = follow(i, &mut visited)?;
        edges.push(CircleEdge {
            id: strip(&all_edges[s].id).to_string(),
            lower: None,
            upper: None,
            style: all_edges[s].style,
            walls,
            crossings: passes,
        });
    }
    edges.sort_by(|a, b| a.id.cmp(&b.id));
    let vertices = all_vertices
        .iter()
        .filter(|v| !v.kind.is_pinned())
        .map(|v| Vertex {
            id: v.id.clone(),
            kind: v.kind,
            height: unshift(v.height),
        })
        .collect();
    let g = CircleKrGraph {
        descriptor: r.descriptor.clone(),
        vertices,
        edges,
    };
    let report = g.validate();
    if !report.ok() {
        return Err(mismatch(report.to_string()));
    }
    Ok(g)
}

fn interface(p: &KrGraph) -> BTreeSet<(String, VertexKind, Option<(String, String)>)> {
    p.vertices
        .iter()
        .filter(|v| v.kind.is_pinned())
        .map(|v| {
            let walls = p
                .edges
                .iter()
                .find(|e| e.lower == v.id || e.upper == v.id)
                .and_then(|e| e.walls.clone());
            (v.id.clone(), v.kind, walls)
        })
        .collect()
}

/// Relative decision on corresponding pieces of two cuts: each pair must
/// have equal critical counts and equal signs on plain circles.
pub fn decide_relative(f_pieces: &[KrGraph], g_pieces: &[KrGraph]) -> Result<bool> {
    if f_pieces.len() != g_pieces.len() {
        return Err(Error::InterfaceMismatch(format!(
            "{} pieces against {}",
            f_pieces.len(),
            g_pieces.len()
        )));
    }
    let mut same = true;
    for (i, (f, g)) in f_pieces.iter().zip(g_pieces).enumerate() {
        if f.sig != g.sig || interface(f) != interface(g) {
            return Err(Error::InterfaceMismatch(format!("piece {i} has different interfaces")));
        }
        let (df, dg) = (f.derived_invariants()?, g.derived_invariants()?);
        same &= df.c == dg.c && df.eps == dg.eps;
    }
    Ok(same)
}
