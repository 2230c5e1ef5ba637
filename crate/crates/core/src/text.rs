//! Line-oriented text format for descriptors, graphs and cut results.
//!
//! ```text
//! # comment
//! surface genus 0 connected true
//! boundary d k 0
//! vertex m EMin 1/5
//! vertex d DMax 4/5
//! edge e m d thin
//! ```
//!
//! Descriptors use `c`, `eps`, `pinned`, `behavior` and `winding` lines.
//! Circle graphs mark heights with `mod1` and may give `crossings`; `-`
//! stands for a missing endpoint of a free loop. A cut result starts with
//! `at p/q`, carries the circle descriptor, then `piece` ... `end` blocks
//! and `pair <top> <bottom>` lines. Writers sort vertices by (height, id)
//! and edges by id, so output is byte-stable.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use crate::circle::{CircleEdge, CircleKrGraph, CutResult};
use crate::error::{Error, Result};
use crate::graph::{Edge, KrGraph, Style, Vertex, VertexKind};
use crate::surface::{
    BoundaryBehavior, BoundaryComponent, CircleMorseDescriptor, RealMorseDescriptor, Sign,
    SurfaceSig,
};
use crate::surgery::MoveInstance;
use crate::Height;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    RealDescriptor(RealMorseDescriptor),
    CircleDescriptor(CircleMorseDescriptor),
    Graph(KrGraph),
    CircleGraph(CircleKrGraph),
    Cut(CutResult),
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with 1-based columns; `#` starts a comment.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

struct Cursor<'a> {
    line: usize,
    toks: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let end_col = self.toks.last().map_or(1, |(c, t)| c + t.len());
        let t = self
            .toks
            .get(self.pos)
            .copied()
            .ok_or_else(|| perr(self.line, end_col, format!("expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn word(&mut self, what: &str) -> Result<&'a str> {
        Ok(self.next(what)?.1)
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let (col, t) = self.next(kw)?;
        if t != kw {
            return Err(perr(self.line, col, format!("expected `{kw}`, found `{t}`")));
        }
        Ok(())
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let (col, t) = self.next(what)?;
        t.parse()
            .map_err(|_| perr(self.line, col, format!("expected {what}, found `{t}`")))
    }

    fn height(&mut self) -> Result<Height> {
        let (col, t) = self.next("a height p/q")?;
        let bad = || perr(self.line, col, format!("expected a rational p/q, found `{t}`"));
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.parse::<i64>().map_err(|_| bad())?, q.parse::<i64>().map_err(|_| bad())?),
            None => (t.parse::<i64>().map_err(|_| bad())?, 1),
        };
        if q == 0 {
            return Err(bad());
        }
        Ok(Height::new(p, q))
    }

    fn sign(&mut self) -> Result<Sign> {
        let (col, t) = self.next("a sign")?;
        match t {
            "+1" | "1" => Ok(Sign::Plus),
            "-1" => Ok(Sign::Minus),
            _ => Err(perr(self.line, col, format!("expected +1 or -1, found `{t}`"))),
        }
    }

    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn done(&self) -> Result<()> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some((col, t)) => Err(perr(self.line, *col, format!("unexpected `{t}`"))),
        }
    }
}

struct RawEdge {
    line: usize,
    id: String,
    lower: Option<String>,
    upper: Option<String>,
    style: Style,
    walls: Option<(String, String)>,
    crossings: Option<u32>,
}

#[derive(Default)]
struct Acc {
    sig: Option<SurfaceSig>,
    c: Option<[u32; 3]>,
    eps: BTreeMap<String, Sign>,
    pinned: BTreeSet<String>,
    behavior: BTreeMap<String, BoundaryBehavior>,
    windings: Option<Vec<i64>>,
    vertices: Vec<(usize, Vertex, bool)>,
    edges: Vec<RawEdge>,
    at: Option<Height>,
    pieces: Vec<KrGraph>,
    pairs: Vec<(String, String)>,
    circle_marks: bool,
}

fn unique(seen: &mut HashSet<String>, id: &str, line: usize, col: usize, what: &str) -> Result<()> {
    if !seen.insert(id.to_string()) {
        return Err(perr(line, col, format!("duplicate {what} id `{id}`")));
    }
    Ok(())
}

fn parse_lines<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, nested: bool) -> Result<Acc> {
    let mut acc = Acc::default();
    let mut vids = HashSet::new();
    let mut eids = HashSet::new();
    let mut labels = HashSet::new();
    while let Some((ln, raw)) = lines.next() {
        let toks = tokens(raw);
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor { line: ln, toks, pos: 0 };
        let (col, head) = cur.next("a directive")?;
        match head {
            "surface" => {
                cur.keyword("genus")?;
                let genus = cur.number("a genus")?;
                cur.keyword("connected")?;
                let (ccol, conn) = cur.next("true or false")?;
                let components = match conn {
                    "true" => 1,
                    "false" => {
                        cur.keyword("components")?;
                        cur.number("a component count")?
                    }
                    _ => return Err(perr(ln, ccol, format!("expected true or false, found `{conn}`"))),
                };
                if acc.sig.is_some() {
                    return Err(perr(ln, col, "repeated surface line"));
                }
                acc.sig = Some(SurfaceSig {
                    genus,
                    boundary: Vec::new(),
                    components,
                });
            }
            "orientable" | "nonorientable" => {
                return Err(perr(ln, col, "only orientable surfaces are supported"));
            }
            "boundary" => {
                let (lcol, label) = cur.next("a boundary label")?;
                cur.keyword("k")?;
                let k = cur.number("a corner count")?;
                unique(&mut labels, label, ln, lcol, "boundary")?;
                acc.sig
                    .as_mut()
                    .ok_or_else(|| perr(ln, col, "boundary before surface line"))?
                    .boundary
                    .push(BoundaryComponent::new(label, k));
            }
            "c" => {
                acc.c = Some([cur.number("c0")?, cur.number("c1")?, cur.number("c2")?]);
            }
            "eps" => {
                let label = cur.word("a label")?.to_string();
                let s = cur.sign()?;
                if acc.eps.insert(label.clone(), s).is_some() {
                    return Err(perr(ln, col, format!("repeated eps for `{label}`")));
                }
            }
            "pinned" => {
                acc.pinned.insert(cur.word("a label")?.to_string());
            }
            "behavior" => {
                let label = cur.word("a label")?.to_string();
                let (kcol, kind) = cur.next("constant or covering")?;
                let b = match kind {
                    "constant" => BoundaryBehavior::Constant(cur.sign()?),
                    "covering" => BoundaryBehavior::Covering(cur.number("a degree")?),
                    _ => return Err(perr(ln, kcol, format!("expected constant or covering, found `{kind}`"))),
                };
                if acc.behavior.insert(label.clone(), b).is_some() {
                    return Err(perr(ln, col, format!("repeated behavior for `{label}`")));
                }
            }
            "winding" => {
                let mut w = Vec::new();
                while cur.peek().is_some() {
                    w.push(cur.number("an integer winding")?);
                }
                acc.windings = Some(w);
            }
            "vertex" => {
                let (icol, id) = cur.next("a vertex id")?;
                unique(&mut vids, id, ln, icol, "vertex")?;
                let (kcol, kind) = cur.next("a vertex kind")?;
                let kind: VertexKind = kind.parse().map_err(|m: String| perr(ln, kcol, m))?;
                let height = cur.height()?;
                let mod1 = cur.peek() == Some("mod1");
                if mod1 {
                    cur.pos += 1;
                    acc.circle_marks = true;
                }
                acc.vertices.push((
                    ln,
                    Vertex {
                        id: id.to_string(),
                        kind,
                        height,
                    },
                    mod1,
                ));
            }
            "edge" => {
                let (icol, id) = cur.next("an edge id")?;
                unique(&mut eids, id, ln, icol, "edge")?;
                let end = |s: &str| (s != "-").then(|| s.to_string());
                let lower = end(cur.word("a lower endpoint")?);
                let upper = end(cur.word("an upper endpoint")?);
                let (scol, style) = cur.next("bold or thin")?;
                let style: Style = style.parse().map_err(|m: String| perr(ln, scol, m))?;
                let mut walls = None;
                let mut crossings = None;
                while let Some(t) = cur.peek() {
                    match t {
                        "walls" => {
                            cur.pos += 1;
                            walls = Some((cur.word("a left wall")?.to_string(), cur.word("a right wall")?.to_string()));
                        }
                        "crossings" => {
                            cur.pos += 1;
                            crossings = Some(cur.number("a crossing count")?);
                            acc.circle_marks = true;
                        }
                        _ => break,
                    }
                }
                acc.edges.push(RawEdge {
                    line: ln,
                    id: id.to_string(),
                    lower,
                    upper,
                    style,
                    walls,
                    crossings,
                });
            }
            "at" if !nested => acc.at = Some(cur.height()?),
            "piece" if !nested => {
                cur.number::<usize>("a piece number")?;
                cur.done()?;
                let inner = parse_lines(lines, true)?;
                acc.pieces.push(build_graph(inner, ln)?);
                continue;
            }
            "end" if nested => {
                cur.done()?;
                return Ok(acc);
            }
            "pair" if !nested => {
                acc.pairs.push((cur.word("a top terminal")?.to_string(), cur.word("a bottom terminal")?.to_string()));
            }
            _ => return Err(perr(ln, col, format!("unknown directive `{head}`"))),
        }
        cur.done()?;
    }
    if nested {
        return Err(perr(0, 0, "piece without `end`"));
    }
    Ok(acc)
}

fn need_sig(acc: &mut Acc, line: usize) -> Result<SurfaceSig> {
    acc.sig.take().ok_or_else(|| perr(line, 1, "missing surface line"))
}

fn build_graph(mut acc: Acc, line: usize) -> Result<KrGraph> {
    let sig = need_sig(&mut acc, line)?;
    if acc.c.is_some() || !acc.behavior.is_empty() || acc.windings.is_some() || !acc.eps.is_empty() {
        return Err(perr(line, 1, "descriptor lines are not allowed in a graph over the interval"));
    }
    if acc.circle_marks {
        return Err(perr(line, 1, "mod1 heights and crossings belong to circle graphs"));
    }
    let mut g = KrGraph::new(sig);
    g.vertices = acc.vertices.into_iter().map(|(_, v, _)| v).collect();
    for e in acc.edges {
        let (Some(lower), Some(upper)) = (e.lower, e.upper) else {
            return Err(perr(e.line, 1, format!("edge {} needs both endpoints", e.id)));
        };
        g.edges.push(Edge {
            id: e.id,
            lower,
            upper,
            style: e.style,
            walls: e.walls,
        });
    }
    Ok(g)
}

fn circle_descriptor(acc: &mut Acc, line: usize) -> Result<CircleMorseDescriptor> {
    let sig = need_sig(acc, line)?;
    Ok(CircleMorseDescriptor {
        sig,
        c: acc.c.ok_or_else(|| perr(line, 1, "missing c line"))?,
        behavior: std::mem::take(&mut acc.behavior),
        windings: acc.windings.take().unwrap_or_default(),
    })
}

pub fn parse(text: &str) -> Result<Document> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut acc = parse_lines(&mut lines, false)?;
    let last = text.lines().count().max(1);
    if let Some(at) = acc.at {
        let descriptor = circle_descriptor(&mut acc, last)?;
        return Ok(Document::Cut(CutResult {
            at,
            descriptor,
            pieces: acc.pieces,
            pairs: acc.pairs,
        }));
    }
    if !acc.pieces.is_empty() || !acc.pairs.is_empty() {
        return Err(perr(last, 1, "pieces and pairs need an `at` line"));
    }
    let circle = acc.circle_marks || !acc.behavior.is_empty() || acc.windings.is_some();
    if !acc.vertices.is_empty() || !acc.edges.is_empty() {
        if !circle {
            return build_graph(acc, last).map(Document::Graph);
        }
        let descriptor = circle_descriptor(&mut acc, last)?;
        let vertices = acc.vertices.into_iter().map(|(_, v, _)| v).collect();
        let edges = acc
            .edges
            .into_iter()
            .map(|e| CircleEdge {
                id: e.id,
                lower: e.lower,
                upper: e.upper,
                style: e.style,
                walls: e.walls,
                crossings: e.crossings.unwrap_or(0),
            })
            .collect();
        return Ok(Document::CircleGraph(CircleKrGraph {
            descriptor,
            vertices,
            edges,
        }));
    }
    if circle {
        return circle_descriptor(&mut acc, last).map(Document::CircleDescriptor);
    }
    let sig = need_sig(&mut acc, last)?;
    Ok(Document::RealDescriptor(RealMorseDescriptor {
        sig,
        c: acc.c.ok_or_else(|| perr(last, 1, "missing c line"))?,
        eps: acc.eps,
        pinned: acc.pinned,
    }))
}

fn wrong(what: &str, found: &Document) -> Error {
    let kind = match found {
        Document::RealDescriptor(_) => "a real descriptor",
        Document::CircleDescriptor(_) => "a circle descriptor",
        Document::Graph(_) => "a graph",
        Document::CircleGraph(_) => "a circle graph",
        Document::Cut(_) => "a cut result",
    };
    perr(1, 1, format!("expected {what}, found {kind}"))
}

pub fn parse_graph(text: &str) -> Result<KrGraph> {
    match parse(text)? {
        Document::Graph(g) => Ok(g),
        other => Err(wrong("a graph", &other)),
    }
}

pub fn parse_circle_graph(text: &str) -> Result<CircleKrGraph> {
    match parse(text)? {
        Document::CircleGraph(g) => Ok(g),
        other => Err(wrong("a circle graph", &other)),
    }
}

pub fn parse_cut(text: &str) -> Result<CutResult> {
    match parse(text)? {
        Document::Cut(r) => Ok(r),
        other => Err(wrong("a cut result", &other)),
    }
}

/// One move per line; blank lines and comments are skipped.
pub fn parse_moves(text: &str) -> Result<Vec<MoveInstance>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let col = line.len() - line.trim_start().len() + 1;
        out.push(body.parse().map_err(|m: String| perr(i + 1, col, m))?);
    }
    Ok(out)
}

fn height(h: &Height) -> String {
    format!("{}/{}", h.numer(), h.denom())
}

fn write_sig(out: &mut String, sig: &SurfaceSig) {
    if sig.components == 1 {
        let _ = writeln!(out, "surface genus {} connected true", sig.genus);
    } else {
        let _ = writeln!(out, "surface genus {} connected false components {}", sig.genus, sig.components);
    }
    for b in &sig.boundary {
        let _ = writeln!(out, "boundary {} k {}", b.label, b.k);
    }
}

pub fn write_real_descriptor(d: &RealMorseDescriptor) -> String {
    let mut out = String::new();
    write_sig(&mut out, &d.sig);
    let _ = writeln!(out, "c {} {} {}", d.c[0], d.c[1], d.c[2]);
    for (l, s) in &d.eps {
        let _ = writeln!(out, "eps {l} {s}");
    }
    for p in &d.pinned {
        let _ = writeln!(out, "pinned {p}");
    }
    out
}

fn write_circle_lines(out: &mut String, d: &CircleMorseDescriptor) {
    write_sig(out, &d.sig);
    let _ = writeln!(out, "c {} {} {}", d.c[0], d.c[1], d.c[2]);
    for (l, b) in &d.behavior {
        match b {
            BoundaryBehavior::Constant(s) => {
                let _ = writeln!(out, "behavior {l} constant {s}");
            }
            BoundaryBehavior::Covering(deg) => {
                let _ = writeln!(out, "behavior {l} covering {deg}");
            }
        }
    }
    let w: Vec<String> = d.windings.iter().map(i64::to_string).collect();
    let _ = writeln!(out, "winding{}{}", if w.is_empty() { "" } else { " " }, w.join(" "));
}

pub fn write_circle_descriptor(d: &CircleMorseDescriptor) -> String {
    let mut out = String::new();
    write_circle_lines(&mut out, d);
    out
}

fn sorted_vertices(vs: &[Vertex]) -> Vec<&Vertex> {
    let mut vs: Vec<&Vertex> = vs.iter().collect();
    vs.sort_by(|a, b| a.height.cmp(&b.height).then_with(|| a.id.cmp(&b.id)));
    vs
}

fn walls_suffix(w: &Option<(String, String)>) -> String {
    w.as_ref().map_or(String::new(), |(l, r)| format!(" walls {l} {r}"))
}

fn write_graph_body(out: &mut String, g: &KrGraph) {
    write_sig(out, &g.sig);
    for v in sorted_vertices(&g.vertices) {
        let _ = writeln!(out, "vertex {} {} {}", v.id, v.kind, height(&v.height));
    }
    let mut edges: Vec<&Edge> = g.edges.iter().collect();
    edges.sort_by(|a, b| a.id.cmp(&b.id));
    for e in edges {
        let _ = writeln!(out, "edge {} {} {} {}{}", e.id, e.lower, e.upper, e.style, walls_suffix(&e.walls));
    }
}

pub fn write_graph(g: &KrGraph) -> String {
    let mut out = String::new();
    write_graph_body(&mut out, g);
    out
}

pub fn write_circle_graph(g: &CircleKrGraph) -> String {
    let mut out = String::new();
    write_circle_lines(&mut out, &g.descriptor);
    for v in sorted_vertices(&g.vertices) {
        let _ = writeln!(out, "vertex {} {} {} mod1", v.id, v.kind, height(&v.height));
    }
    let mut edges: Vec<&CircleEdge> = g.edges.iter().collect();
    edges.sort_by(|a, b| a.id.cmp(&b.id));
    for e in edges {
        let _ = writeln!(
            out,
            "edge {} {} {} {}{} crossings {}",
            e.id,
            e.lower.as_deref().unwrap_or("-"),
            e.upper.as_deref().unwrap_or("-"),
            e.style,
            walls_suffix(&e.walls),
            e.crossings
        );
    }
    out
}

pub fn write_cut(r: &CutResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "at {}", height(&r.at));
    write_circle_lines(&mut out, &r.descriptor);
    for (i, p) in r.pieces.iter().enumerate() {
        let _ = writeln!(out, "piece {}", i + 1);
        write_graph_body(&mut out, p);
        let _ = writeln!(out, "end");
    }
    for (t, b) in &r.pairs {
        let _ = writeln!(out, "pair {t} {b}");
    }
    out
}

pub fn serialize(doc: &Document) -> String {
    match doc {
        Document::RealDescriptor(d) => write_real_descriptor(d),
        Document::CircleDescriptor(d) => write_circle_descriptor(d),
        Document::Graph(g) => write_graph(g),
        Document::CircleGraph(g) => write_circle_graph(g),
        Document::Cut(r) => write_cut(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::fixtures as cf;
    use crate::graph::fixtures as gf;

    fn round_trip(doc: Document) {
        let text = serialize(&doc);
        let back = parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(serialize(&back), text);
    }

    #[test]
    fn round_trips() {
        round_trip(Document::Graph(gf::disk()));
        round_trip(Document::Graph(gf::x_graph()));
        round_trip(Document::CircleGraph(cf::torus_fibration()));
        round_trip(Document::CircleGraph(cf::covering_annulus()));
        round_trip(Document::CircleGraph(cf::pants()));
        round_trip(Document::CircleDescriptor(cf::split_genus2().descriptor));
        let d = gf::disk().descriptor().unwrap();
        round_trip(Document::RealDescriptor(d));
        let r = crate::circle::cut(&cf::split_genus2(), Height::new(0, 1)).unwrap();
        round_trip(Document::Cut(r.clone()));
        assert_eq!(parse_cut(&write_cut(&r)).unwrap(), r);
    }

    #[test]
    fn parse_is_order_insensitive() {
        let text = "surface genus 0 connected true\nboundary d k 0\nedge e m d thin\nvertex d DMax 4/5\nvertex m EMin 1/5 # min\n";
        assert_eq!(write_graph(&parse_graph(text).unwrap()), write_graph(&gf::disk()));
    }

    #[test]
    fn errors_carry_positions() {
        let bad_kind = "surface genus 0 connected true\nvertex m Blob 1/5\n";
        assert_eq!(
            parse(bad_kind).unwrap_err(),
            Error::Parse {
                line: 2,
                column: 10,
                message: "unknown vertex kind \"Blob\"".into()
            }
        );
        let dup = "surface genus 0 connected true\nvertex m EMin 1/5\nvertex m EMax 4/5\n";
        assert!(matches!(parse(dup), Err(Error::Parse { line: 3, column: 8, .. })));
        assert!(matches!(parse("surface genus x connected true\n"), Err(Error::Parse { line: 1, column: 15, .. })));
        assert!(matches!(parse("vertex m EMin 1/0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("nonorientable genus 1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn moves_parse() {
        let text = "# replay\nmove ValueSwap a up b\n\nmove BlockSlide x down y kinds=S3M,S4B to-lower=e1 links=e2:bold:a:b\n";
        let moves = parse_moves(text).unwrap();
        assert_eq!(moves.len(), 2);
        assert_eq!(moves[1].to_string(), "move BlockSlide x down y kinds=S3M,S4B to-lower=e1 links=e2:bold:a:b");
        assert!(matches!(parse_moves("move Nope a up b"), Err(Error::Parse { line: 1, .. })));
    }
}
