//! Canonical graphs: bold ladders `X`, the thin block `Y`, and their
//! assembly from invariants.
//!
//! Layout of an assembled graph, bottom to top: a lower band holding the
//! blocks whose thin leg rises into `Y`, the `Y` band, and an upper band
//! holding blocks whose leg descends from `Y`. Inside `Y` the sources are
//! merged one by one into a single strand, the strand runs through `z`
//! split/merge cycles and then peels off the sinks one by one. Heights are
//! ranks `i/(N+1)`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Edge, KrGraph, Vertex, VertexKind};
use crate::surface::{BoundaryComponent, RealMorseDescriptor, Sign, SurfaceSig};
use crate::Height;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum XVariant {
    Zero,
    /// Thin leg going up from the bold line.
    Plus,
    /// Thin leg coming down into the bold line.
    Minus,
    /// One leg up low on the line and one leg down high on it.
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Leaf {
    EVertex,
    DVertex(String),
    /// The leg stays open and is attached to `Y` during assembly.
    Attach,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XSpec {
    /// Prefix for the ids of the block's vertices, edges and walls.
    pub name: String,
    pub k: u32,
    pub variant: XVariant,
    pub leaf: Option<Leaf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct YSpec {
    pub z: u32,
    pub e_minus: u32,
    pub e_plus: u32,
    /// Labels of boundary circles at a local minimum / maximum.
    pub b_minus: Vec<String>,
    pub b_plus: Vec<String>,
    /// Legs entering from below (from `X+` blocks) and leaving upward
    /// (into `X-` blocks).
    pub n_attach: u32,
    pub n_attach_down: u32,
    /// Boundary labels realized by `CMin`/`CMax` terminals.
    pub pinned: BTreeSet<String>,
}

impl YSpec {
    fn sources(&self) -> u32 {
        self.n_attach + self.e_minus + self.b_minus.len() as u32
    }

    fn sinks(&self) -> u32 {
        self.e_plus + self.b_plus.len() as u32 + self.n_attach_down
    }

    /// Number of `S3T` saddles: leaves + 2z - 2.
    pub fn saddle_count(&self) -> u32 {
        self.sources() + self.sinks() + 2 * self.z - 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Type1X,
    Type1Y,
    Type2,
    Type3,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Type1X => "Type1-X",
            Shape::Type1Y => "Type1-Y",
            Shape::Type2 => "Type2",
            Shape::Type3 => "Type3",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub shape: Shape,
    pub blocks: Vec<XSpec>,
    pub y: Option<YSpec>,
}

/// A block under construction. Interior vertices are kept in three bands
/// and receive heights only when the assembly is finished; ids starting
/// with `@` are open leg ends that get spliced.
struct Asm {
    prefix: String,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    bands: [Vec<usize>; 3],
}

const LOWER: usize = 0;
const MIDDLE: usize = 1;
const UPPER: usize = 2;

impl Asm {
    fn new(prefix: &str) -> Self {
        Self {
            prefix: prefix.to_string(),
            vertices: Vec::new(),
            edges: Vec::new(),
            bands: [Vec::new(), Vec::new(), Vec::new()],
        }
    }

    fn interior(&mut self, id: String, kind: VertexKind, band: usize) -> String {
        self.bands[band].push(self.vertices.len());
        self.vertices.push(Vertex {
            id: id.clone(),
            kind,
            height: Height::zero(),
        });
        id
    }

    fn terminal(&mut self, id: String, kind: VertexKind) -> String {
        let height = kind.pinned_height().expect("terminal kind");
        self.vertices.push(Vertex {
            id: id.clone(),
            kind,
            height,
        });
        id
    }

    fn leaf(&mut self, id: String, kind: VertexKind, band: usize) -> String {
        if kind.is_pinned() {
            self.terminal(id, kind)
        } else {
            self.interior(id, kind, band)
        }
    }

    fn thin(&mut self, id: String, lower: &str, upper: &str) {
        self.edges.push(Edge::thin(id, lower, upper));
    }

    fn bold(&mut self, id: String, lower: &str, upper: &str, walls: &(String, String)) {
        self.edges.push(Edge::bold(id, lower, upper, walls.0.clone(), walls.1.clone()));
    }

    fn finish(mut self, sig: SurfaceSig) -> KrGraph {
        let order: Vec<usize> = self.bands.iter().flatten().copied().collect();
        let n = order.len() as i64;
        for (r, &vi) in order.iter().enumerate() {
            self.vertices[vi].height = Height::new(r as i64 + 1, n + 1);
        }
        let open: Vec<String> = self
            .edges
            .iter()
            .flat_map(|e| [&e.lower, &e.upper])
            .filter(|v| v.starts_with('@'))
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for p in open {
            let below = self.edges.iter().position(|e| e.upper == p);
            let above = self.edges.iter().position(|e| e.lower == p);
            if let (Some(a), Some(b)) = (below, above) {
                self.edges[a].upper = self.edges[b].upper.clone();
                self.edges.remove(b);
            }
        }
        KrGraph {
            sig,
            vertices: self.vertices,
            edges: self.edges,
        }
    }
}

fn add_x(asm: &mut Asm, s: &XSpec, up_leg: &str, down_leg: &str) -> Result<()> {
    if s.k == 0 {
        return Err(Error::InvalidSpec(format!("block {} has k = 0", s.name)));
    }
    match (s.variant, &s.leaf) {
        (XVariant::Zero, None) | (XVariant::Both, None | Some(Leaf::Attach)) => {}
        (XVariant::Plus | XVariant::Minus, Some(_)) => {}
        (XVariant::Zero, Some(_)) => {
            return Err(Error::InvalidSpec(format!("block {} is X0 but has a leaf", s.name)))
        }
        (XVariant::Both, Some(_)) => {
            return Err(Error::InvalidSpec(format!("block {} has two legs; both attach", s.name)))
        }
        (_, None) => return Err(Error::InvalidSpec(format!("block {} needs a leaf", s.name))),
    }
    let p = format!("{}{}.", asm.prefix, s.name);
    let mut edge_no = 0;
    let mut next_edge = || {
        edge_no += 1;
        format!("{p}e{edge_no}")
    };
    let wall = |side: &str, j: u32| format!("{p}{side}{j}");

    for j in 0..s.k {
        asm.terminal(format!("{p}t{j}"), VertexKind::TMin);
        asm.terminal(format!("{p}u{j}"), VertexKind::TMax);
    }
    let mut cur = format!("{p}t0");
    let mut walls = (wall("l", 0), wall("r", 0));

    let leaf_end = |asm: &mut Asm, up: bool| -> String {
        match &s.leaf {
            Some(Leaf::EVertex) if up => asm.interior(format!("{p}leaf"), VertexKind::EMax, UPPER),
            Some(Leaf::EVertex) => asm.interior(format!("{p}leaf"), VertexKind::EMin, LOWER),
            Some(Leaf::DVertex(label)) if up => asm.interior(label.clone(), VertexKind::DMax, UPPER),
            Some(Leaf::DVertex(label)) => asm.interior(label.clone(), VertexKind::DMin, LOWER),
            _ if up => up_leg.to_string(),
            _ => down_leg.to_string(),
        }
    };
    let s3m = |asm: &mut Asm, cur: &mut String, walls: &(String, String), id: String, up: bool, band: usize, e1: String, e2: String| {
        let m = asm.interior(id, VertexKind::S3M, band);
        asm.bold(e1, cur, &m, walls);
        let end = leaf_end(asm, up);
        if up {
            asm.thin(e2, &m, &end);
        } else {
            asm.thin(e2, &end, &m);
        }
        *cur = m;
    };

    let s4b_band = if s.variant == XVariant::Minus { UPPER } else { LOWER };
    if s.variant == XVariant::Minus {
        let (e1, e2) = (next_edge(), next_edge());
        s3m(asm, &mut cur, &walls, format!("{p}m"), false, UPPER, e1, e2);
    }
    for i in 1..s.k {
        let x = asm.interior(format!("{p}s{i}"), VertexKind::S4B, s4b_band);
        let side = (wall("l", i), wall("r", i));
        asm.bold(next_edge(), &cur, &x, &walls);
        asm.bold(next_edge(), &format!("{p}t{i}"), &x, &side);
        asm.bold(next_edge(), &x, &format!("{p}u{i}"), &(side.0.clone(), walls.1.clone()));
        walls = (walls.0, side.1);
        cur = x;
    }
    match s.variant {
        XVariant::Plus => {
            let (e1, e2) = (next_edge(), next_edge());
            s3m(asm, &mut cur, &walls, format!("{p}m"), true, LOWER, e1, e2);
        }
        XVariant::Both => {
            let (e1, e2) = (next_edge(), next_edge());
            s3m(asm, &mut cur, &walls, format!("{p}mu"), true, LOWER, e1, e2);
            let (e1, e2) = (next_edge(), next_edge());
            s3m(asm, &mut cur, &walls, format!("{p}md"), false, UPPER, e1, e2);
        }
        _ => {}
    }
    asm.bold(next_edge(), &cur, &format!("{p}u0"), &walls);
    Ok(())
}

fn add_y(asm: &mut Asm, y: &YSpec, up_legs: &[String], down_legs: &[String]) -> Result<()> {
    if y.sources() == 0 || y.sinks() == 0 {
        return Err(Error::NonRealizable(format!(
            "Y needs a source and a sink leaf, found {} and {}",
            y.sources(),
            y.sinks()
        )));
    }
    let p = format!("{}y.", asm.prefix);
    let mut edge_no = 0;
    let mut next_edge = || {
        edge_no += 1;
        format!("{p}e{edge_no}")
    };

    let mut sources: Vec<String> = up_legs.to_vec();
    for j in 0..y.e_minus {
        sources.push(asm.interior(format!("{p}min{j}"), VertexKind::EMin, MIDDLE));
    }
    let mut b_minus = y.b_minus.clone();
    b_minus.sort();
    b_minus.sort_by_key(|l| y.pinned.contains(l));
    for label in b_minus {
        let kind = if y.pinned.contains(&label) { VertexKind::CMin } else { VertexKind::DMin };
        sources.push(asm.leaf(label, kind, MIDDLE));
    }

    let mut strand = sources[0].clone();
    for (i, src) in sources.iter().enumerate().skip(1) {
        let j = asm.interior(format!("{p}j{i}"), VertexKind::S3T, MIDDLE);
        asm.thin(next_edge(), &strand, &j);
        asm.thin(next_edge(), src, &j);
        strand = j;
    }
    for c in 0..y.z {
        let split = asm.interior(format!("{p}s{c}"), VertexKind::S3T, MIDDLE);
        let merge = asm.interior(format!("{p}m{c}"), VertexKind::S3T, MIDDLE);
        asm.thin(next_edge(), &strand, &split);
        asm.thin(next_edge(), &split, &merge);
        asm.thin(next_edge(), &split, &merge);
        strand = merge;
    }

    let sink_count = y.sinks() as usize;
    let mut peel_edges = Vec::new();
    for i in 0..sink_count - 1 {
        let peel = asm.interior(format!("{p}p{i}"), VertexKind::S3T, MIDDLE);
        asm.thin(next_edge(), &strand, &peel);
        peel_edges.push((next_edge(), peel.clone()));
        strand = peel;
    }
    let last = next_edge();

    let mut sinks: Vec<String> = Vec::new();
    for j in 0..y.e_plus {
        sinks.push(asm.interior(format!("{p}max{j}"), VertexKind::EMax, MIDDLE));
    }
    let mut b_plus = y.b_plus.clone();
    b_plus.sort();
    b_plus.sort_by_key(|l| y.pinned.contains(l));
    for label in b_plus {
        let kind = if y.pinned.contains(&label) { VertexKind::CMax } else { VertexKind::DMax };
        sinks.push(asm.leaf(label, kind, MIDDLE));
    }
    sinks.extend(down_legs.iter().cloned());

    for ((id, peel), sink) in peel_edges.into_iter().zip(&sinks) {
        asm.thin(id, &peel, sink);
    }
    asm.thin(last, &strand, &sinks[sink_count - 1]);
    Ok(())
}

/// Builds one `X` block on its own. Attach legs are left open.
pub fn build_x_block(s: &XSpec) -> Result<KrGraph> {
    let mut asm = Asm::new("");
    add_x(&mut asm, s, "@up", "@down")?;
    let mut boundary = vec![BoundaryComponent::new(s.name.clone(), s.k)];
    if let Some(Leaf::DVertex(label)) = &s.leaf {
        boundary.push(BoundaryComponent::new(label.clone(), 0));
    }
    Ok(asm.finish(SurfaceSig::connected(0, boundary)))
}

/// Builds the thin block `Y` on its own. Attach legs are left open.
pub fn build_y_block(y: &YSpec) -> Result<KrGraph> {
    let mut asm = Asm::new("");
    let up: Vec<String> = (0..y.n_attach).map(|i| format!("@src{i}")).collect();
    let down: Vec<String> = (0..y.n_attach_down).map(|i| format!("@snk{i}")).collect();
    add_y(&mut asm, y, &up, &down)?;
    let boundary = y
        .b_minus
        .iter()
        .chain(&y.b_plus)
        .map(|l| BoundaryComponent::new(l.clone(), 0))
        .collect();
    Ok(asm.finish(SurfaceSig::connected(y.z, boundary)))
}

/// The canonical shape for a descriptor. Checks the key set of `eps`,
/// connectivity and extrema, but not the saddle count.
pub fn canonical_form(d: &RealMorseDescriptor) -> Result<CanonicalForm> {
    if !d.sig.is_connected() {
        return Err(Error::NonRealizable("the surface is not connected".into()));
    }
    let plain = d.sig.plain_labels();
    let keys: BTreeSet<&str> = d.eps.keys().map(String::as_str).collect();
    if plain != keys {
        return Err(Error::NonRealizable(format!(
            "eps is defined on {keys:?} but the plain boundary labels are {plain:?}"
        )));
    }
    if let Some(p) = d.pinned.iter().find(|p| !plain.contains(p.as_str())) {
        return Err(Error::NonRealizable(format!("pinned label {p} is not a plain circle")));
    }

    let mut corners: Vec<&BoundaryComponent> = d.sig.boundary.iter().filter(|b| b.k > 0).collect();
    corners.sort_by(|a, b| (a.k, &a.label).cmp(&(b.k, &b.label)));
    let n = corners.len();
    let labels = |sign: Sign| -> Vec<String> {
        d.eps
            .iter()
            .filter(|(_, s)| **s == sign)
            .map(|(l, _)| l.clone())
            .collect()
    };
    let (b_minus, b_plus) = (labels(Sign::Minus), labels(Sign::Plus));
    let m_minus = d.c[0] + b_minus.len() as u32;
    let m_plus = d.c[2] + b_plus.len() as u32;
    let g = d.sig.genus;
    let mut y = YSpec {
        z: g,
        e_minus: d.c[0],
        e_plus: d.c[2],
        b_minus,
        b_plus,
        n_attach: 0,
        n_attach_down: 0,
        pinned: d.pinned.clone(),
    };

    if n == 0 {
        if m_minus == 0 || m_plus == 0 {
            return Err(Error::NonRealizable(
                "a surface without corners needs both a minimum and a maximum".into(),
            ));
        }
        return Ok(CanonicalForm {
            shape: Shape::Type1Y,
            blocks: Vec::new(),
            y: Some(y),
        });
    }

    let block = |i: usize, variant: XVariant| XSpec {
        name: format!("x{i}"),
        k: corners[i].k,
        variant,
        leaf: match variant {
            XVariant::Zero => None,
            _ => Some(Leaf::Attach),
        },
    };
    if n == 1 && m_minus == 0 && m_plus == 0 && g == 0 {
        return Ok(CanonicalForm {
            shape: Shape::Type1X,
            blocks: vec![block(0, XVariant::Zero)],
            y: None,
        });
    }

    let mut blocks: Vec<XSpec> = (0..n).map(|i| block(i, XVariant::Plus)).collect();
    if m_plus == 0 {
        if n >= 2 || m_minus >= 1 {
            blocks[n - 1] = block(n - 1, XVariant::Minus);
        } else {
            blocks[0] = block(0, XVariant::Both);
            y.z = g - 1;
        }
    }
    y.n_attach = blocks
        .iter()
        .filter(|b| matches!(b.variant, XVariant::Plus | XVariant::Both))
        .count() as u32;
    y.n_attach_down = blocks
        .iter()
        .filter(|b| matches!(b.variant, XVariant::Minus | XVariant::Both))
        .count() as u32;
    let shape = if n == 2 && y.n_attach == 1 && y.n_attach_down == 1 && y.saddle_count() == 0 {
        Shape::Type2
    } else {
        Shape::Type3
    };
    Ok(CanonicalForm {
        shape,
        blocks,
        y: Some(y),
    })
}

fn assemble(form: &CanonicalForm, sig: &SurfaceSig, prefix: &str) -> Result<KrGraph> {
    let mut asm = Asm::new(prefix);
    let mut up_legs = Vec::new();
    let mut down_legs = Vec::new();
    for (i, b) in form.blocks.iter().enumerate() {
        let (up, down) = (format!("@src{i}"), format!("@snk{i}"));
        add_x(&mut asm, b, &up, &down)?;
        if matches!(b.variant, XVariant::Plus | XVariant::Both) {
            up_legs.push(up);
        }
        if matches!(b.variant, XVariant::Minus | XVariant::Both) {
            down_legs.push(down);
        }
    }
    if let Some(y) = &form.y {
        add_y(&mut asm, y, &up_legs, &down_legs)?;
    }
    Ok(asm.finish(sig.clone()))
}

/// Builds the canonical graph realizing a descriptor.
pub fn canonical_from_invariants(d: &RealMorseDescriptor) -> Result<KrGraph> {
    let form = canonical_form(d)?;
    let plain = d.sig.plain_labels();
    // generated ids must not shadow boundary labels
    let mut prefix = String::new();
    let g = loop {
        let g = assemble(&form, &d.sig, &prefix)?;
        let clash = g
            .vertices
            .iter()
            .any(|v| !v.kind.is_plain_boundary() && plain.contains(v.id.as_str()));
        if !clash {
            break g;
        }
        prefix.push('_');
    };
    let c = g.critical_counts_unchecked();
    if c != d.c {
        return Err(Error::NonRealizable(format!(
            "counting identity forces c = {c:?}, descriptor has {:?}",
            d.c
        )));
    }
    Ok(g)
}

/// True iff `g` is generic and KR-equivalent to the canonical graph of its
/// own invariants.
pub fn is_canonical(g: &KrGraph) -> Result<bool> {
    let d = g.descriptor()?;
    if !g.is_generic_unchecked() {
        return Ok(false);
    }
    match canonical_from_invariants(&d) {
        Ok(c) => Ok(c.certificate_unchecked() == g.certificate_unchecked()),
        Err(_) => Ok(false),
    }
}
