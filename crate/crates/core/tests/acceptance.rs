//! Acceptance suite. Runs without the libtest harness and prints one line
//! per criterion; exits nonzero if any criterion fails.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use krcalc::canonical::{canonical_from_invariants, is_canonical};
use krcalc::circle::{circle_equivalent, cut, glue, regular_values};
use krcalc::enumerate::{descriptor_candidates, enumerate_circle_graphs, enumerate_graphs, EnumBound};
use krcalc::graph::kr_equivalent;
use krcalc::surface::{
    same_component_circle, same_component_real, validate_circle, validate_real, BoundaryBehavior, Sign,
};
use krcalc::surgery::{applicable_moves, apply_move, canonicalize, inverse};
use krcalc::text::{self, Document};
use krcalc::{dot, BoundaryComponent, CircleMorseDescriptor, Error, KrGraph, SurfaceSig, VertexKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn sig_key(g: &KrGraph) -> String {
    format!("{:?}", g.sig)
}

/// 1. For all pairs of enumerated graphs on one signature, the invariant
/// decider agrees with equality of the normalized graphs.
fn criterion_1(graphs: &[KrGraph]) -> Outcome {
    let start = Instant::now();
    let mut stuck = 0;
    let mut canon_cert: Vec<String> = Vec::with_capacity(graphs.len());
    for g in graphs {
        match canonicalize(g) {
            Ok((c, _)) => canon_cert.push(c.certificate().map_err(|e| e.to_string())?),
            Err(Error::NormalizationStuck { .. }) => {
                stuck += 1;
                canon_cert.push(String::new());
            }
            Err(e) => return Err(format!("canonicalize failed: {e}")),
        }
    }
    if stuck > 0 {
        return Err(format!("{stuck} graphs got stuck"));
    }
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, g) in graphs.iter().enumerate() {
        groups.entry(sig_key(g)).or_default().push(i);
    }
    let descriptors: Vec<_> = graphs.iter().map(|g| g.descriptor().unwrap()).collect();
    let mut pairs = 0u64;
    let mut disagreements = 0u64;
    for members in groups.values() {
        // the decider only sees descriptors, so pairs are checked per cell of
        // equal (descriptor, normalized graph) with multiplicities
        let mut cells: BTreeMap<(String, &str), (usize, u64)> = BTreeMap::new();
        for &i in members {
            cells.entry((format!("{:?}", descriptors[i]), canon_cert[i].as_str())).or_insert((i, 0)).1 += 1;
        }
        let cells: Vec<_> = cells.into_iter().collect();
        for (a, ((_, ca), (i, na))) in cells.iter().enumerate() {
            for ((_, cb), (j, nb)) in &cells[a..] {
                let weight = if i == j { na * (na - 1) / 2 } else { na * nb };
                if weight == 0 {
                    continue;
                }
                let decided = same_component_real(&descriptors[*i], &descriptors[*j]).map_err(|e| e.to_string())?;
                if decided != (ca == cb) {
                    disagreements += weight;
                }
            }
        }
        let n = members.len() as u64;
        pairs += n * (n - 1) / 2;
    }
    let elapsed = start.elapsed();
    if disagreements > 0 {
        return Err(format!("{disagreements} disagreements"));
    }
    if elapsed > Duration::from_secs(300) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!(
        "{} graphs, {} signatures, {pairs} pairs, 0 stuck, {elapsed:.1?}",
        graphs.len(),
        groups.len()
    ))
}

/// 2. Random moves keep the invariants, and undoing them returns an
/// equivalent graph.
fn criterion_2(graphs: &[KrGraph]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut done = 0;
    let mut violations = 0;
    while done < 10_000 {
        let g = &graphs[rng.gen_range(0..graphs.len())];
        let moves = applicable_moves(g).map_err(|e| e.to_string())?;
        if moves.is_empty() {
            continue;
        }
        let m = &moves[rng.gen_range(0..moves.len())];
        let h = apply_move(g, m).map_err(|e| e.to_string())?;
        let same = h.derived_invariants().ok() == g.derived_invariants().ok();
        let back = inverse(g, m).and_then(|inv| apply_move(&h, &inv)).and_then(|b| kr_equivalent(&b, g));
        if !same || !matches!(back, Ok(true)) {
            violations += 1;
        }
        done += 1;
    }
    if violations > 0 {
        return Err(format!("{violations} of {done} applications broke"));
    }
    Ok(format!("{done} applications, 0 violations"))
}

/// 3. Euler characteristic from pieces, from the signature and from the
/// critical counts.
fn criterion_3(graphs: &[KrGraph]) -> Outcome {
    for g in graphs {
        let pieces = g.euler_from_pieces().map_err(|e| e.to_string())?;
        let from_sig = 2 - 2 * i64::from(g.sig.genus) - g.sig.boundary.len() as i64;
        let count = |f: &dyn Fn(VertexKind) -> bool| g.vertices.iter().filter(|v| f(v.kind)).count() as i64;
        let corners: i64 = g.sig.boundary.iter().map(|b| i64::from(b.k)).sum();
        let c0 = count(&|k| k == VertexKind::EMin);
        let c1 = count(&|k| matches!(k, VertexKind::S3T | VertexKind::S3M | VertexKind::S4B));
        let c2 = count(&|k| k == VertexKind::EMax);
        let from_counts = corners + c0 - c1 + c2;
        if pieces != from_sig || from_sig != from_counts {
            return Err(format!("{pieces} / {from_sig} / {from_counts} for\n{}", text::write_graph(g)));
        }
    }
    Ok(format!("{} graphs", graphs.len()))
}

/// 4. Descriptor to graph to descriptor, and canonical graph to descriptor
/// to graph.
fn criterion_4(graphs: &[KrGraph]) -> Outcome {
    let mut valid = 0;
    let candidates = descriptor_candidates(6, 2, 4, 4);
    for d in &candidates {
        let accepted = validate_real(d).ok();
        let built = canonical_from_invariants(d);
        if accepted != built.is_ok() {
            return Err(format!("validation and construction disagree on {d:?}"));
        }
        let Ok(g) = built else { continue };
        valid += 1;
        if !g.validate().ok() || g.descriptor().as_ref() != Ok(d) || is_canonical(&g) != Ok(true) {
            return Err(format!("round trip fails for {d:?}"));
        }
        let again = canonical_from_invariants(&g.descriptor().unwrap()).map_err(|e| e.to_string())?;
        if kr_equivalent(&again, &g) != Ok(true) {
            return Err(format!("rebuilding changes the graph for {d:?}"));
        }
    }
    let mut canonical_enumerated = 0;
    for g in graphs {
        if is_canonical(g) != Ok(true) {
            continue;
        }
        canonical_enumerated += 1;
        let again = canonical_from_invariants(&g.descriptor().unwrap()).map_err(|e| e.to_string())?;
        if kr_equivalent(&again, g) != Ok(true) {
            return Err(format!("canonical graph not reproduced:\n{}", text::write_graph(g)));
        }
    }
    Ok(format!(
        "{} candidates, {valid} valid descriptors, {canonical_enumerated} enumerated canonical graphs",
        candidates.len()
    ))
}

/// 5. Cut at every regular interval midpoint and glue back.
fn criterion_5() -> Outcome {
    const WRAPS: usize = 2;
    let graphs = enumerate_circle_graphs(&EnumBound::vertices(6), WRAPS);
    let mut cuts = 0;
    for g in &graphs {
        let chi = g.euler_from_pieces().map_err(|e| e.to_string())?;
        let windings = g.wall_windings();
        for (label, b) in &g.descriptor.behavior {
            if let BoundaryBehavior::Covering(d) = b {
                if windings.get(label).map(|w| w.abs()) != Some(d.abs()) {
                    return Err(format!("winding of {label} differs from degree {d}"));
                }
            }
        }
        for arc in regular_values(g) {
            let r = cut(g, arc.midpoint()).map_err(|e| e.to_string())?;
            let pieces: i64 = r.pieces.iter().map(|p| p.euler_from_pieces().unwrap()).sum();
            if pieces != chi + r.bold_cuts() as i64 {
                return Err(format!("chi {pieces} after cut, {chi} before, {} bold cuts", r.bold_cuts()));
            }
            let back = glue(&r).map_err(|e| e.to_string())?;
            if circle_equivalent(&back, g) != Ok(true) {
                return Err(format!("glue(cut) differs for\n{}", text::write_circle_graph(g)));
            }
            cuts += 1;
        }
    }
    Ok(format!("{} circle graphs (at most {WRAPS} wrapping edges), {cuts} cuts", graphs.len()))
}

fn circ(genus: u32, boundary: &[(&str, BoundaryBehavior)], c: [u32; 3], windings: &[i64]) -> CircleMorseDescriptor {
    CircleMorseDescriptor {
        sig: SurfaceSig::connected(genus, boundary.iter().map(|(l, _)| BoundaryComponent::new(*l, 0)).collect()),
        c,
        behavior: boundary.iter().map(|(l, b)| (l.to_string(), *b)).collect(),
        windings: windings.to_vec(),
    }
}

/// 6. Hand-checked verdicts: same homotopy class, same critical counts and
/// same signs on constant circles.
fn criterion_6() -> Outcome {
    use BoundaryBehavior::{Constant, Covering};
    use Sign::{Minus, Plus};
    let ann = |a: BoundaryBehavior, b: BoundaryBehavior, c: [u32; 3]| circ(0, &[("a", a), ("b", b)], c, &[]);
    let torus = |w: [i64; 2], c: [u32; 3]| circ(1, &[], c, &w);
    let pants = |a, b, cc, c: [u32; 3]| circ(0, &[("a", a), ("b", b), ("c", cc)], c, &[]);
    let disk = |s: Sign, c: [u32; 3]| circ(0, &[("d", Constant(s))], c, &[]);
    let z = [0, 0, 0];
    let table: Vec<(&str, CircleMorseDescriptor, CircleMorseDescriptor, bool)> = vec![
        ("annulus degree 1 vs itself", ann(Covering(1), Covering(-1), z), ann(Covering(1), Covering(-1), z), true),
        ("annulus degree 1 vs 2", ann(Covering(1), Covering(-1), z), ann(Covering(2), Covering(-2), z), false),
        ("annulus degree 1 vs -1", ann(Covering(1), Covering(-1), z), ann(Covering(-1), Covering(1), z), false),
        ("annulus covering, extra min and saddle", ann(Covering(1), Covering(-1), z), ann(Covering(1), Covering(-1), [1, 1, 0]), false),
        ("annulus covering with min and saddle", ann(Covering(1), Covering(-1), [1, 1, 0]), ann(Covering(1), Covering(-1), [1, 1, 0]), true),
        ("annulus constant vs covering", ann(Constant(Minus), Constant(Plus), z), ann(Covering(1), Covering(-1), z), false),
        ("annulus constant vs itself", ann(Constant(Minus), Constant(Plus), z), ann(Constant(Minus), Constant(Plus), z), true),
        ("annulus signs swapped", ann(Constant(Minus), Constant(Plus), z), ann(Constant(Plus), Constant(Minus), z), false),
        ("annulus two minimum circles", ann(Constant(Minus), Constant(Minus), [0, 1, 1]), ann(Constant(Minus), Constant(Minus), [0, 1, 1]), true),
        ("annulus one sign flipped", ann(Constant(Minus), Constant(Minus), [0, 1, 1]), ann(Constant(Minus), Constant(Plus), [0, 1, 1]), false),
        ("annulus degree 2 vs itself", ann(Covering(2), Covering(-2), z), ann(Covering(2), Covering(-2), z), true),
        ("torus fibration vs itself", torus([1, 0], z), torus([1, 0], z), true),
        ("torus fibration, other generator", torus([1, 0], z), torus([0, 1], z), false),
        ("torus fibration, double", torus([1, 0], z), torus([2, 0], z), false),
        ("torus fibration, reversed", torus([1, 0], z), torus([-1, 0], z), false),
        ("torus fibration with extra critical points", torus([1, 0], z), torus([1, 0], [1, 2, 1]), false),
        ("torus map with critical points vs itself", torus([1, 0], [1, 2, 1]), torus([1, 0], [1, 2, 1]), true),
        ("torus null-homotopic vs winding", torus([0, 0], [1, 2, 1]), torus([1, 0], [1, 2, 1]), false),
        ("torus diagonal class", torus([1, 1], z), torus([1, 1], z), true),
        ("pants signs equal", pants(Constant(Minus), Constant(Minus), Constant(Plus), [0, 1, 0]), pants(Constant(Minus), Constant(Minus), Constant(Plus), [0, 1, 0]), true),
        ("pants signs permuted", pants(Constant(Minus), Constant(Minus), Constant(Plus), [0, 1, 0]), pants(Constant(Minus), Constant(Plus), Constant(Minus), [0, 1, 0]), false),
        ("pants signs rotated", pants(Constant(Minus), Constant(Minus), Constant(Plus), [0, 1, 0]), pants(Constant(Plus), Constant(Minus), Constant(Minus), [0, 1, 0]), false),
        ("pants coverings vs itself", pants(Covering(1), Covering(1), Covering(-2), [0, 1, 0]), pants(Covering(1), Covering(1), Covering(-2), [0, 1, 0]), true),
        ("pants coverings permuted", pants(Covering(1), Covering(1), Covering(-2), [0, 1, 0]), pants(Covering(2), Covering(-1), Covering(-1), [0, 1, 0]), false),
        ("pants mixed, constant sign differs", pants(Covering(1), Covering(-1), Constant(Plus), [0, 1, 0]), pants(Covering(1), Covering(-1), Constant(Minus), [0, 1, 0]), false),
        ("pants mixed vs itself", pants(Covering(1), Covering(-1), Constant(Plus), [0, 1, 0]), pants(Covering(1), Covering(-1), Constant(Plus), [0, 1, 0]), true),
        ("pants counts differ", pants(Constant(Minus), Constant(Minus), Constant(Plus), [0, 1, 0]), pants(Constant(Minus), Constant(Minus), Constant(Plus), [1, 2, 0]), false),
        ("mirror disks", disk(Plus, [1, 0, 0]), disk(Minus, [0, 0, 1]), false),
        ("disk vs itself", disk(Plus, [1, 0, 0]), disk(Plus, [1, 0, 0]), true),
        ("disk with a saddle pair", disk(Minus, [0, 0, 1]), disk(Minus, [1, 1, 1]), false),
        ("disk, two minima", disk(Plus, [1, 0, 0]), disk(Plus, [2, 1, 0]), false),
    ];
    let mut wrong = Vec::new();
    for (name, f, g, want) in &table {
        for d in [f, g] {
            let r = validate_circle(d);
            if !r.ok() {
                return Err(format!("{name}: invalid descriptor: {r}"));
            }
        }
        match same_component_circle(f, g) {
            Ok(got) if got == *want => {}
            other => wrong.push(format!("{name}: {other:?}")),
        }
    }
    if !wrong.is_empty() {
        return Err(wrong.join("; "));
    }
    Ok(format!("{} pairs", table.len()))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn cli(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_krcalc"))
        .args(args)
        .current_dir(golden_dir())
        .output()
        .expect("run krcalc");
    (String::from_utf8_lossy(&out.stdout).into_owned(), out.status.code().unwrap_or(-1))
}

fn read(name: &str) -> String {
    std::fs::read_to_string(golden_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// 7. Byte-exact text and DOT output for the reference graphs, and the exit
/// code contract.
fn criterion_7() -> Outcome {
    let mut names: Vec<String> = std::fs::read_dir(golden_dir())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".krg"))
        .collect();
    names.sort();
    if names.len() != 10 {
        return Err(format!("expected 10 reference graphs, found {}", names.len()));
    }
    for n in &names {
        let stem = n.trim_end_matches(".krg");
        let g = text::parse_graph(&read(n)).map_err(|e| format!("{n}: {e}"))?;
        let want_txt = read(&format!("{stem}.txt"));
        let want_dot = read(&format!("{stem}.dot"));
        if text::write_graph(&g) != want_txt || dot::to_dot(&g).ok().as_deref() != Some(want_dot.as_str()) {
            return Err(format!("{n}: library output differs from golden"));
        }
        if cli(&["format", n]) != (want_txt.clone(), 0) || cli(&["render", n]) != (want_dot, 0) {
            return Err(format!("{n}: CLI output differs from golden"));
        }
        if text::write_graph(&text::parse_graph(&want_txt).unwrap()) != want_txt {
            return Err(format!("{n}: normal form is not stable"));
        }
    }
    if cli(&["cut", "fibration.circ", "--at", "1/2"]) != (read("fibration_cut.txt"), 0) {
        return Err("cut output differs from golden".into());
    }

    let codes: Vec<(Vec<&str>, i32)> = vec![
        (vec!["validate", "disk.krg"], 0),
        (vec!["validate", "broken.bad"], 1),
        (vec!["validate", "unknown_kind.bad"], 2),
        (vec!["validate", "missing.krg"], 2),
        (vec!["equivalent", "pants_f.desc", "pants_f.desc"], 0),
        (vec!["equivalent", "pants_f.desc", "pants_g.desc"], 1),
        (vec!["equivalent", "annulus_deg1.desc", "annulus_deg2.desc"], 1),
        (vec!["equivalent", "disk.krg", "pants.krg"], 2),
        (vec!["equivalent", "--kr", "pants.krg", "pants.krg"], 0),
        (vec!["cut", "fibration.circ", "--at", "1/4"], 2),
        (vec!["canonical", "annulus_deg1.desc"], 2),
        (vec!["enumerate", "--bound", "2", "--count"], 0),
        (vec!["render", "--bogus"], 2),
    ];
    for (args, want) in &codes {
        let (_, got) = cli(args);
        if got != *want {
            return Err(format!("krcalc {} exited {got}, expected {want}", args.join(" ")));
        }
    }

    // the CLI decider matches the library on every golden pair with one signature
    let inputs: Vec<String> = std::fs::read_dir(golden_dir())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".krg") || n.ends_with(".desc") || n.ends_with(".circ"))
        .collect();
    let mut parsed: HashMap<&str, Document> = HashMap::new();
    for n in &inputs {
        parsed.insert(n, text::parse(&read(n)).map_err(|e| format!("{n}: {e}"))?);
    }
    let mut compared = 0;
    for a in &inputs {
        for b in &inputs {
            let library = decide(&parsed[a.as_str()], &parsed[b.as_str()]);
            let Some(library) = library else { continue };
            let (out, code) = cli(&["equivalent", a, b]);
            let expected = if library { ("true\n".to_string(), 0) } else { ("false\n".to_string(), 1) };
            if (out, code) != expected {
                return Err(format!("equivalent {a} {b} disagrees with the library"));
            }
            compared += 1;
        }
    }
    Ok(format!("{} reference graphs, {} exit codes, {compared} decider pairs", names.len(), codes.len()))
}

fn decide(a: &Document, b: &Document) -> Option<bool> {
    let real = |d: &Document| match d {
        Document::Graph(g) => g.descriptor().ok(),
        Document::RealDescriptor(d) => Some(d.clone()),
        _ => None,
    };
    let circle = |d: &Document| match d {
        Document::CircleGraph(g) => Some(g.descriptor.clone()),
        Document::CircleDescriptor(d) => Some(d.clone()),
        _ => None,
    };
    if let (Some(f), Some(g)) = (real(a), real(b)) {
        return same_component_real(&f, &g).ok();
    }
    if let (Some(f), Some(g)) = (circle(a), circle(b)) {
        return same_component_circle(&f, &g).ok();
    }
    None
}

fn main() {
    let graphs = enumerate_graphs(&EnumBound::vertices(8));
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 decider agrees with normalization", Box::new(|| criterion_1(&graphs))),
        ("2 surgery invariance", Box::new(|| criterion_2(&graphs))),
        ("3 euler three ways", Box::new(|| criterion_3(&graphs))),
        ("4 canonical bijection", Box::new(|| criterion_4(&graphs))),
        ("5 cut and glue", Box::new(criterion_5)),
        ("6 circle decider table", Box::new(criterion_6)),
        ("7 cli goldens", Box::new(criterion_7)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
