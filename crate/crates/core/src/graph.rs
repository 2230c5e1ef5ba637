//! Decorated Kronrod-Reeb graphs of functions into the unit interval.
//!
//! Vertices sit at rational heights. Terminal kinds (`TMin`, `TMax`, `CMin`,
//! `CMax`) are pinned to height 0 or 1; every other kind lives strictly
//! inside the interval. Bold edges carry a pair of wall ids `(left, right)`
//! naming the monotone boundary arcs swept by the two endpoints of the level
//! arc. A wall keeps its side through every saddle, and is joined to its
//! partner across a `D` arc at a `TMin` and across a `B` arc at a `TMax`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::surface::{self, RealMorseDescriptor, Sign, SurfaceSig, ValidationReport};
use crate::Height;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    EMin,
    EMax,
    DMin,
    DMax,
    TMin,
    TMax,
    CMin,
    CMax,
    S3T,
    S3M,
    S4B,
}

impl VertexKind {
    pub const ALL: [VertexKind; 11] = [
        VertexKind::EMin,
        VertexKind::EMax,
        VertexKind::DMin,
        VertexKind::DMax,
        VertexKind::TMin,
        VertexKind::TMax,
        VertexKind::CMin,
        VertexKind::CMax,
        VertexKind::S3T,
        VertexKind::S3M,
        VertexKind::S4B,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VertexKind::EMin => "EMin",
            VertexKind::EMax => "EMax",
            VertexKind::DMin => "DMin",
            VertexKind::DMax => "DMax",
            VertexKind::TMin => "TMin",
            VertexKind::TMax => "TMax",
            VertexKind::CMin => "CMin",
            VertexKind::CMax => "CMax",
            VertexKind::S3T => "S3T",
            VertexKind::S3M => "S3M",
            VertexKind::S4B => "S4B",
        }
    }

    /// Kinds pinned to height 0 or 1.
    pub fn pinned_height(self) -> Option<Height> {
        match self {
            VertexKind::TMin | VertexKind::CMin => Some(Height::zero()),
            VertexKind::TMax | VertexKind::CMax => Some(Height::one()),
            _ => None,
        }
    }

    pub fn is_pinned(self) -> bool {
        self.pinned_height().is_some()
    }

    pub fn is_saddle(self) -> bool {
        matches!(self, VertexKind::S3T | VertexKind::S3M | VertexKind::S4B)
    }

    /// Vertices standing for a plain boundary circle (`D*` and `C*`).
    pub fn is_plain_boundary(self) -> bool {
        matches!(
            self,
            VertexKind::DMin | VertexKind::DMax | VertexKind::CMin | VertexKind::CMax
        )
    }

    pub fn is_extended(self) -> bool {
        matches!(self, VertexKind::CMin | VertexKind::CMax)
    }

    /// Sign of a plain boundary circle vertex.
    pub fn boundary_sign(self) -> Option<Sign> {
        match self {
            VertexKind::DMin | VertexKind::CMin => Some(Sign::Minus),
            VertexKind::DMax | VertexKind::CMax => Some(Sign::Plus),
            _ => None,
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VertexKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        VertexKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown vertex kind {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Style {
    Bold,
    Thin,
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Bold => "bold",
            Style::Thin => "thin",
        })
    }
}

impl FromStr for Style {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bold" => Ok(Style::Bold),
            "thin" => Ok(Style::Thin),
            _ => Err(format!("unknown edge style {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub kind: VertexKind,
    pub height: Height,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub lower: String,
    pub upper: String,
    pub style: Style,
    pub walls: Option<(String, String)>,
}

impl Edge {
    pub fn thin(id: impl Into<String>, lower: impl Into<String>, upper: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            lower: lower.into(),
            upper: upper.into(),
            style: Style::Thin,
            walls: None,
        }
    }

    pub fn bold(
        id: impl Into<String>,
        lower: impl Into<String>,
        upper: impl Into<String>,
        left: impl Into<String>,
        right: impl Into<String>,
    ) -> Self {
        Self {
            id: id.into(),
            lower: lower.into(),
            upper: upper.into(),
            style: Style::Bold,
            walls: Some((left.into(), right.into())),
        }
    }

    pub(crate) fn slot(&self) -> Slot<'_> {
        Slot {
            style: self.style,
            walls: self.walls.as_ref().map(|(l, r)| (l.as_str(), r.as_str())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KrGraph {
    pub sig: SurfaceSig,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

/// The style and walls of one edge end, as seen by a vertex rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Slot<'a> {
    pub style: Style,
    pub walls: Option<(&'a str, &'a str)>,
}

fn count_style(slots: &[Slot<'_>], style: Style) -> usize {
    slots.iter().filter(|s| s.style == style).count()
}

/// Local model of a vertex: degree and style pattern, plus wall welds.
pub(crate) fn check_local(kind: VertexKind, down: &[Slot<'_>], up: &[Slot<'_>]) -> Result<(), String> {
    use VertexKind::*;
    let pattern = |db: usize, dt: usize, ub: usize, ut: usize| {
        count_style(down, Style::Bold) == db
            && count_style(down, Style::Thin) == dt
            && count_style(up, Style::Bold) == ub
            && count_style(up, Style::Thin) == ut
    };
    let shape = || {
        format!(
            "{kind} has {} bold + {} thin below and {} bold + {} thin above",
            count_style(down, Style::Bold),
            count_style(down, Style::Thin),
            count_style(up, Style::Bold),
            count_style(up, Style::Thin)
        )
    };
    match kind {
        EMin | DMin | CMin => {
            if !pattern(0, 0, 0, 1) {
                return Err(shape());
            }
        }
        EMax | DMax | CMax => {
            if !pattern(0, 1, 0, 0) {
                return Err(shape());
            }
        }
        TMin => {
            if !pattern(0, 0, 1, 0) {
                return Err(shape());
            }
        }
        TMax => {
            if !pattern(1, 0, 0, 0) {
                return Err(shape());
            }
        }
        S3T => {
            if !(pattern(0, 2, 0, 1) || pattern(0, 1, 0, 2)) {
                return Err(shape());
            }
        }
        S3M => {
            if !(pattern(1, 0, 1, 1) || pattern(1, 1, 1, 0)) {
                return Err(shape());
            }
            let below = down.iter().find(|s| s.style == Style::Bold).and_then(|s| s.walls);
            let above = up.iter().find(|s| s.style == Style::Bold).and_then(|s| s.walls);
            if below.is_none() || below != above {
                return Err(format!(
                    "S3M must pass its walls straight through, found {below:?} below and {above:?} above"
                ));
            }
        }
        S4B => {
            if !pattern(2, 0, 2, 0) {
                return Err(shape());
            }
            let (Some((a, b)), Some((c, d))) = (down[0].walls, down[1].walls) else {
                return Err("S4B edge without walls".to_string());
            };
            let mut expected = [(a, d), (c, b)];
            expected.sort_unstable();
            let mut found: Vec<(&str, &str)> = up.iter().filter_map(|s| s.walls).collect();
            found.sort_unstable();
            if found.as_slice() != expected.as_slice() {
                return Err(format!(
                    "S4B welds {:?} below into {:?} above; expected {:?}",
                    [(a, b), (c, d)],
                    found,
                    expected
                ));
            }
        }
    }
    Ok(())
}

/// A boundary circle reconstructed from the graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TracedCircle {
    /// Vertex id for plain circles; `None` for corner circles.
    pub label: Option<String>,
    /// Walls met along a corner circle, sorted.
    pub walls: Vec<String>,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivedInvariants {
    pub c: [u32; 3],
    pub eps: BTreeMap<String, Sign>,
    pub corner_multiset: Vec<u32>,
    pub chi: i64,
    pub bold_terminal_counts: (u32, u32),
    pub circle_terminal_counts: (u32, u32),
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl KrGraph {
    pub fn new(sig: SurfaceSig) -> Self {
        Self {
            sig,
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, kind: VertexKind, height: Height) {
        self.vertices.push(Vertex {
            id: id.into(),
            kind,
            height,
        });
    }

    pub fn add_edge(&mut self, edge: Edge) {
        self.edges.push(edge);
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn vertex_index(&self) -> HashMap<&str, usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect()
    }

    /// Down and up edge indices of every vertex; edges with unknown
    /// endpoints are skipped.
    pub fn incidence(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let index = self.vertex_index();
        let mut inc = vec![(Vec::new(), Vec::new()); self.vertices.len()];
        for (ei, e) in self.edges.iter().enumerate() {
            if let Some(&u) = index.get(e.upper.as_str()) {
                inc[u].0.push(ei);
            }
            if let Some(&l) = index.get(e.lower.as_str()) {
                inc[l].1.push(ei);
            }
        }
        inc
    }

    pub fn count_kind(&self, kind: VertexKind) -> u32 {
        self.vertices.iter().filter(|v| v.kind == kind).count() as u32
    }

    pub fn has_extended(&self) -> bool {
        self.vertices.iter().any(|v| v.kind.is_extended())
    }

    /// Interior vertices (everything but terminals) in increasing height.
    pub fn interior_by_height(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.vertices.len())
            .filter(|&i| !self.vertices[i].kind.is_pinned())
            .collect();
        idx.sort_by(|&a, &b| {
            self.vertices[a]
                .height
                .cmp(&self.vertices[b].height)
                .then_with(|| self.vertices[a].id.cmp(&self.vertices[b].id))
        });
        idx
    }

    fn component_count(&self) -> usize {
        let index = self.vertex_index();
        let mut dsu = Dsu::new(self.vertices.len());
        for e in &self.edges {
            if let (Some(&a), Some(&b)) = (index.get(e.lower.as_str()), index.get(e.upper.as_str())) {
                dsu.union(a, b);
            }
        }
        (0..self.vertices.len())
            .filter(|&i| dsu.find(i) == i)
            .count()
    }

    /// Checks ids, heights, styles and local vertex rules; returns the
    /// report and whether the structure is sound enough to trace walls.
    fn validate_structure(&self) -> (ValidationReport, bool) {
        let mut report = ValidationReport::default();
        if self.vertices.is_empty() {
            report.push("G0", "the graph has no vertices");
            return (report, false);
        }
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.id.as_str()) {
                report.push("G0", format!("duplicate vertex id {}", v.id));
            }
        }
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            if !seen.insert(e.id.as_str()) {
                report.push("G0", format!("duplicate edge id {}", e.id));
            }
        }
        let index = self.vertex_index();
        for e in &self.edges {
            for end in [&e.lower, &e.upper] {
                if !index.contains_key(end.as_str()) {
                    report.push("G0", format!("edge {} refers to unknown vertex {end}", e.id));
                }
            }
        }
        if !report.ok() {
            return (report, false);
        }

        for v in &self.vertices {
            match v.kind.pinned_height() {
                Some(h) if v.height != h => report.push(
                    "G1",
                    format!("{} {} must sit at height {}", v.kind, v.id, h),
                ),
                None if v.height <= Height::zero() || v.height >= Height::one() => report.push(
                    "G1",
                    format!("{} {} must lie strictly inside (0,1)", v.kind, v.id),
                ),
                _ => {}
            }
        }
        for e in &self.edges {
            let lo = &self.vertices[index[e.lower.as_str()]];
            let hi = &self.vertices[index[e.upper.as_str()]];
            if lo.height >= hi.height {
                report.push(
                    "G2",
                    format!("edge {} does not rise from {} to {}", e.id, lo.id, hi.id),
                );
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
        let styles_ok = !report.has("G3");
        for (vi, (down, up)) in self.incidence().iter().enumerate() {
            let down: Vec<Slot<'_>> = down.iter().map(|&i| self.edges[i].slot()).collect();
            let up: Vec<Slot<'_>> = up.iter().map(|&i| self.edges[i].slot()).collect();
            if let Err(msg) = check_local(self.vertices[vi].kind, &down, &up) {
                report.push("G4", format!("{}: {msg}", self.vertices[vi].id));
            }
        }
        let sound = styles_ok && !report.has("G4");
        (report, sound)
    }

    fn trace_circles(&self) -> std::result::Result<Vec<TracedCircle>, String> {
        let index = self.vertex_index();
        let mut left_walls = BTreeSet::new();
        let mut right_walls = BTreeSet::new();
        for e in &self.edges {
            if let Some((l, r)) = &e.walls {
                left_walls.insert(l.as_str());
                right_walls.insert(r.as_str());
            }
        }
        if let Some(w) = left_walls.intersection(&right_walls).next() {
            return Err(format!("wall {w} is used on both sides"));
        }
        let walls: Vec<&str> = left_walls.iter().chain(right_walls.iter()).copied().collect();
        let wall_index: HashMap<&str, usize> = walls.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let mut bottoms = vec![0usize; walls.len()];
        let mut tops = vec![0usize; walls.len()];
        let mut dsu = Dsu::new(walls.len());
        let mut tmins_per_root: Vec<(usize, usize)> = Vec::new();
        for e in &self.edges {
            let Some((l, r)) = &e.walls else { continue };
            let (li, ri) = (wall_index[l.as_str()], wall_index[r.as_str()]);
            if self.vertices[index[e.lower.as_str()]].kind == VertexKind::TMin {
                bottoms[li] += 1;
                bottoms[ri] += 1;
                dsu.union(li, ri);
                tmins_per_root.push((li, 1));
            }
            if self.vertices[index[e.upper.as_str()]].kind == VertexKind::TMax {
                tops[li] += 1;
                tops[ri] += 1;
                dsu.union(li, ri);
            }
        }
        for (i, w) in walls.iter().enumerate() {
            if bottoms[i] != 1 || tops[i] != 1 {
                return Err(format!(
                    "wall {w} starts at {} D arcs and ends at {} B arcs",
                    bottoms[i], tops[i]
                ));
            }
        }
        let mut circles: BTreeMap<usize, TracedCircle> = BTreeMap::new();
        for (i, w) in walls.iter().enumerate() {
            let root = dsu.find(i);
            circles
                .entry(root)
                .or_insert_with(|| TracedCircle {
                    label: None,
                    walls: Vec::new(),
                    k: 0,
                })
                .walls
                .push(w.to_string());
        }
        for (w, n) in tmins_per_root {
            let root = dsu.find(w);
            circles.get_mut(&root).expect("traced wall").k += n as u32;
        }
        let mut out: Vec<TracedCircle> = circles
            .into_values()
            .map(|mut c| {
                c.walls.sort();
                c
            })
            .collect();
        for v in &self.vertices {
            if v.kind.is_plain_boundary() {
                out.push(TracedCircle {
                    label: Some(v.id.clone()),
                    walls: Vec::new(),
                    k: 0,
                });
            }
        }
        out.sort();
        Ok(out)
    }

    pub(crate) fn pieces_chi(&self) -> i64 {
        let vertex_part: i64 = self
            .vertices
            .iter()
            .map(|v| match v.kind {
                VertexKind::EMin
                | VertexKind::EMax
                | VertexKind::TMin
                | VertexKind::TMax
                | VertexKind::S4B => 1,
                VertexKind::S3T => -1,
                _ => 0,
            })
            .sum();
        let bold = self.edges.iter().filter(|e| e.style == Style::Bold).count() as i64;
        vertex_part - bold
    }

    pub fn validate(&self) -> ValidationReport {
        let (mut report, sound) = self.validate_structure();
        if !sound {
            return report;
        }
        let tmin = self.count_kind(VertexKind::TMin);
        let tmax = self.count_kind(VertexKind::TMax);
        let corners = self.sig.corner_total();
        if tmin != corners || tmax != corners {
            report.push(
                "G6",
                format!("{tmin} TMin and {tmax} TMax terminals for {corners} corner quadruples"),
            );
        }
        match self.trace_circles() {
            Err(msg) => report.push("G5", msg),
            Ok(circles) => {
                let mut ks: Vec<u32> = circles.iter().filter(|c| c.label.is_none()).map(|c| c.k).collect();
                ks.sort_unstable();
                if ks != self.sig.corner_multiset() {
                    report.push(
                        "G7",
                        format!(
                            "traced corner circles {ks:?} differ from signature {:?}",
                            self.sig.corner_multiset()
                        ),
                    );
                }
                let traced: BTreeSet<&str> = circles.iter().filter_map(|c| c.label.as_deref()).collect();
                if traced != self.sig.plain_labels() {
                    report.push(
                        "G7",
                        format!(
                            "plain boundary vertices {traced:?} differ from signature {:?}",
                            self.sig.plain_labels()
                        ),
                    );
                }
            }
        }
        let chi = self.pieces_chi();
        let expected = surface::euler_characteristic(&self.sig);
        if chi != expected {
            report.push("G8", format!("pieces give chi = {chi}, signature gives {expected}"));
        }
        let comps = self.component_count();
        if comps != self.sig.components as usize {
            report.push(
                "G9",
                format!("{comps} connected components, signature declares {}", self.sig.components),
            );
        }
        report
    }

    /// Validation in the strict space: additionally rejects circle terminals.
    pub fn validate_strict(&self) -> ValidationReport {
        let mut report = self.validate();
        for v in &self.vertices {
            if v.kind.is_extended() {
                report.push("X1", format!("{} {} belongs to the extended space", v.kind, v.id));
            }
        }
        report
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.ok() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(report))
        }
    }

    pub fn critical_counts(&self) -> Result<[u32; 3]> {
        self.require_valid()?;
        Ok(self.critical_counts_unchecked())
    }

    pub(crate) fn critical_counts_unchecked(&self) -> [u32; 3] {
        let saddles = self.vertices.iter().filter(|v| v.kind.is_saddle()).count() as u32;
        [
            self.count_kind(VertexKind::EMin),
            saddles,
            self.count_kind(VertexKind::EMax),
        ]
    }

    /// Euler characteristic glued from vertex neighbourhoods and bold strips.
    pub fn euler_from_pieces(&self) -> Result<i64> {
        self.require_valid()?;
        Ok(self.pieces_chi())
    }

    pub fn boundary_trace(&self) -> Result<Vec<TracedCircle>> {
        let (report, sound) = self.validate_structure();
        if !sound || !report.ok() {
            return Err(Error::InvalidGraph(report));
        }
        self.trace_circles().map_err(Error::WallMismatch)
    }

    pub fn is_generic(&self) -> Result<bool> {
        self.require_valid()?;
        Ok(self.is_generic_unchecked())
    }

    pub(crate) fn is_generic_unchecked(&self) -> bool {
        let mut heights: Vec<&Height> = self
            .vertices
            .iter()
            .filter(|v| !v.kind.is_pinned())
            .map(|v| &v.height)
            .collect();
        let n = heights.len();
        heights.sort();
        heights.dedup();
        heights.len() == n
    }

    pub fn derived_invariants(&self) -> Result<DerivedInvariants> {
        self.require_valid()?;
        Ok(self.derived_unchecked())
    }

    pub(crate) fn derived_unchecked(&self) -> DerivedInvariants {
        let eps = self
            .vertices
            .iter()
            .filter_map(|v| v.kind.boundary_sign().map(|s| (v.id.clone(), s)))
            .collect();
        let mut corner_multiset: Vec<u32> = self
            .trace_circles()
            .map(|cs| cs.into_iter().filter(|c| c.label.is_none()).map(|c| c.k).collect())
            .unwrap_or_default();
        corner_multiset.sort_unstable();
        DerivedInvariants {
            c: self.critical_counts_unchecked(),
            eps,
            corner_multiset,
            chi: self.pieces_chi(),
            bold_terminal_counts: (self.count_kind(VertexKind::TMin), self.count_kind(VertexKind::TMax)),
            circle_terminal_counts: (self.count_kind(VertexKind::CMin), self.count_kind(VertexKind::CMax)),
        }
    }

    /// The descriptor realized by this graph over its declared signature.
    pub fn descriptor(&self) -> Result<RealMorseDescriptor> {
        let inv = self.derived_invariants()?;
        Ok(RealMorseDescriptor {
            sig: self.sig.clone(),
            c: inv.c,
            eps: inv.eps,
            pinned: self
                .vertices
                .iter()
                .filter(|v| v.kind.is_extended())
                .map(|v| v.id.clone())
                .collect(),
        })
    }

    /// A string that two valid generic graphs share iff they are
    /// KR-equivalent: an isomorphism matching kinds, edge styles and the
    /// wall structure, and preserving the order of heights.
    pub fn certificate(&self) -> Result<String> {
        self.require_valid()?;
        if !self.is_generic_unchecked() {
            return Err(Error::NonGeneric("interior heights repeat".to_string()));
        }
        Ok(self.certificate_unchecked())
    }

    pub(crate) fn certificate_unchecked(&self) -> String {
        let interior = self.interior_by_height();
        let n = interior.len();
        let mut rank = vec![0usize; self.vertices.len()];
        for (r, &vi) in interior.iter().enumerate() {
            rank[vi] = r + 1;
        }
        let index = self.vertex_index();
        let end_key = |vid: &str, top: bool| -> (usize, u8) {
            let v = index[vid];
            let kind = self.vertices[v].kind;
            if kind.is_pinned() {
                let tag = if kind == VertexKind::TMin || kind == VertexKind::TMax { 1 } else { 2 };
                (if top { n + 1 } else { 0 }, tag)
            } else {
                (rank[v], 0)
            }
        };
        let mut groups: BTreeMap<((usize, u8), (usize, u8), Style), Vec<usize>> = BTreeMap::new();
        for (ei, e) in self.edges.iter().enumerate() {
            let key = (end_key(&e.lower, false), end_key(&e.upper, true), e.style);
            groups.entry(key).or_default().push(ei);
        }
        let mut head = String::new();
        for &vi in &interior {
            head.push_str(self.vertices[vi].kind.name());
            head.push(',');
        }
        head.push('|');

        let keys: Vec<_> = groups.keys().cloned().collect();
        let orders: Vec<Vec<Vec<usize>>> = keys
            .iter()
            .map(|k| {
                let members = &groups[k];
                if k.2 == Style::Bold && members.len() > 1 {
                    permutations(members)
                } else {
                    vec![members.clone()]
                }
            })
            .collect();

        let mut best: Option<String> = None;
        let mut choice = vec![0usize; orders.len()];
        loop {
            let mut relabel: HashMap<&str, usize> = HashMap::new();
            let mut s = head.clone();
            for (gi, key) in keys.iter().enumerate() {
                for &ei in &orders[gi][choice[gi]] {
                    let e = &self.edges[ei];
                    s.push_str(&format!("{}.{}-{}.{}-{}", key.0 .0, key.0 .1, key.1 .0, key.1 .1, e.style));
                    if let Some((l, r)) = &e.walls {
                        let next = relabel.len();
                        let li = *relabel.entry(l.as_str()).or_insert(next);
                        let next = relabel.len();
                        let ri = *relabel.entry(r.as_str()).or_insert(next);
                        s.push_str(&format!("({li},{ri})"));
                    }
                    s.push(';');
                }
            }
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
            // advance the mixed-radix counter over group orders
            let mut gi = 0;
            loop {
                if gi == orders.len() {
                    return best.unwrap_or(head);
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
}

pub(crate) fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// KR-equivalence of two valid generic graphs.
pub fn kr_equivalent(g: &KrGraph, h: &KrGraph) -> Result<bool> {
    Ok(g.certificate()? == h.certificate()?)
}

pub fn validate_graph(g: &KrGraph) -> ValidationReport {
    g.validate()
}
