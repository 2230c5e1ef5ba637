//! Surface signatures, Morse-map descriptors and the invariant-based deciders.
//!
//! Heights are measured against a fixed orientation of the target (increasing
//! values), so `Sign::Plus` marks a boundary circle sitting at a local maximum
//! and `Sign::Minus` one at a local minimum.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::canonical;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-1",
            Sign::Plus => "+1",
        })
    }
}

/// One boundary circle. `k` counts the A-B-C-D quadruples of its corner
/// subdivision; `k == 0` is a plain circle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryComponent {
    pub label: String,
    pub k: u32,
}

impl BoundaryComponent {
    pub fn new(label: impl Into<String>, k: u32) -> Self {
        Self {
            label: label.into(),
            k,
        }
    }
}

/// Signature of a compact orientable surface with corners.
///
/// `components` is the number of connected components and `genus` the total
/// genus over all of them. Deciders only accept connected signatures.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SurfaceSig {
    pub genus: u32,
    pub boundary: Vec<BoundaryComponent>,
    pub components: u32,
}

impl SurfaceSig {
    pub fn connected(genus: u32, boundary: Vec<BoundaryComponent>) -> Self {
        Self {
            genus,
            boundary,
            components: 1,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.components == 1
    }

    pub fn corner_total(&self) -> u32 {
        self.boundary.iter().map(|b| b.k).sum()
    }

    pub fn plain_labels(&self) -> BTreeSet<&str> {
        self.boundary
            .iter()
            .filter(|b| b.k == 0)
            .map(|b| b.label.as_str())
            .collect()
    }

    /// Sorted multiset of the corner counts of boundary circles with `k >= 1`.
    pub fn corner_multiset(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self.boundary.iter().map(|b| b.k).filter(|&k| k > 0).collect();
        ks.sort_unstable();
        ks
    }

    pub fn find(&self, label: &str) -> Option<&BoundaryComponent> {
        self.boundary.iter().find(|b| b.label == label)
    }

    fn duplicate_labels(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        let mut dups = Vec::new();
        for b in &self.boundary {
            if !seen.insert(b.label.as_str()) {
                dups.push(b.label.as_str());
            }
        }
        dups
    }
}

/// Euler characteristic: sum over components of `2 - 2g - b`.
pub fn euler_characteristic(sig: &SurfaceSig) -> i64 {
    2 * i64::from(sig.components) - 2 * i64::from(sig.genus) - sig.boundary.len() as i64
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub rule: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, rule: &str, detail: impl Into<String>) {
        self.violations.push(Violation {
            rule: rule.to_string(),
            detail: detail.into(),
        });
    }

    pub fn has(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.rule, v.detail)?;
        }
        Ok(())
    }
}

/// A real-valued Morse function on a surface with corners, up to the data
/// that classifies its path component.
///
/// `pinned` lists plain boundary circles that sit at level 0 or 1 (the
/// extended space produced by cutting); their sign follows the level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RealMorseDescriptor {
    pub sig: SurfaceSig,
    pub c: [u32; 3],
    pub eps: BTreeMap<String, Sign>,
    pub pinned: BTreeSet<String>,
}

impl RealMorseDescriptor {
    pub fn new(sig: SurfaceSig, c: [u32; 3], eps: BTreeMap<String, Sign>) -> Self {
        Self {
            sig,
            c,
            eps,
            pinned: BTreeSet::new(),
        }
    }

    pub fn count_eps(&self, sign: Sign) -> u32 {
        self.eps.values().filter(|&&s| s == sign).count() as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryBehavior {
    Constant(Sign),
    Covering(i64),
}

impl BoundaryBehavior {
    pub fn degree(self) -> i64 {
        match self {
            BoundaryBehavior::Constant(_) => 0,
            BoundaryBehavior::Covering(d) => d,
        }
    }
}

/// A circle-valued Morse map whose boundary restrictions are constant or
/// coverings. The homotopy class is stored as boundary degrees (in boundary
/// order) followed by `2 * genus` windings against a fixed basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CircleMorseDescriptor {
    pub sig: SurfaceSig,
    pub c: [u32; 3],
    pub behavior: BTreeMap<String, BoundaryBehavior>,
    pub windings: Vec<i64>,
}

impl CircleMorseDescriptor {
    pub fn class_vector(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .sig
            .boundary
            .iter()
            .map(|b| self.behavior.get(&b.label).map_or(0, |bh| bh.degree()))
            .collect();
        v.extend(&self.windings);
        v
    }

    /// The same map viewed as a lift to the real line; meaningful only when
    /// the class vector vanishes.
    pub fn as_real(&self) -> RealMorseDescriptor {
        let sig = SurfaceSig {
            genus: self.sig.genus,
            boundary: self
                .sig
                .boundary
                .iter()
                .map(|b| BoundaryComponent::new(b.label.clone(), 0))
                .collect(),
            components: self.sig.components,
        };
        let eps = self
            .behavior
            .iter()
            .filter_map(|(l, b)| match b {
                BoundaryBehavior::Constant(s) => Some((l.clone(), *s)),
                BoundaryBehavior::Covering(_) => None,
            })
            .collect();
        RealMorseDescriptor::new(sig, self.c, eps)
    }
}

pub fn validate_real(d: &RealMorseDescriptor) -> ValidationReport {
    let mut report = ValidationReport::default();
    for dup in d.sig.duplicate_labels() {
        report.push("S0", format!("boundary label {dup} is repeated"));
    }

    let chi = euler_characteristic(&d.sig);
    let rhs = i64::from(d.sig.corner_total()) + i64::from(d.c[0]) - i64::from(d.c[1])
        + i64::from(d.c[2]);
    if chi != rhs {
        report.push(
            "E1",
            format!("chi = {chi} but sum k + c0 - c1 + c2 = {rhs}"),
        );
    }

    let plain = d.sig.plain_labels();
    let keys: BTreeSet<&str> = d.eps.keys().map(String::as_str).collect();
    if plain != keys {
        report.push(
            "E2",
            format!("eps is defined on {keys:?} but the plain boundary labels are {plain:?}"),
        );
    }
    for p in &d.pinned {
        if !plain.contains(p.as_str()) {
            report.push("E2", format!("pinned label {p} is not a plain boundary circle"));
        }
    }

    if d.sig.corner_total() == 0 {
        if d.c[0] + d.count_eps(Sign::Minus) == 0 {
            report.push("E3", "the function attains no minimum");
        }
        if d.c[2] + d.count_eps(Sign::Plus) == 0 {
            report.push("E3", "the function attains no maximum");
        }
    }

    if report.ok() {
        if let Err(e) = canonical::canonical_from_invariants(d) {
            report.push("E4", e.to_string());
        }
    }
    report
}

pub fn validate_circle(d: &CircleMorseDescriptor) -> ValidationReport {
    let mut report = ValidationReport::default();
    for dup in d.sig.duplicate_labels() {
        report.push("S0", format!("boundary label {dup} is repeated"));
    }
    let labels: BTreeSet<&str> = d.sig.boundary.iter().map(|b| b.label.as_str()).collect();
    let keys: BTreeSet<&str> = d.behavior.keys().map(String::as_str).collect();
    if labels != keys {
        report.push(
            "S1",
            format!("behavior is given for {keys:?} but the boundary labels are {labels:?}"),
        );
    }
    if d.windings.len() != 2 * d.sig.genus as usize {
        report.push(
            "S2",
            format!(
                "expected {} genus windings, found {}",
                2 * d.sig.genus,
                d.windings.len()
            ),
        );
    }

    let chi = euler_characteristic(&d.sig);
    let rhs = i64::from(d.c[0]) - i64::from(d.c[1]) + i64::from(d.c[2]);
    if chi != rhs {
        report.push("C1", format!("chi = {chi} but c0 - c1 + c2 = {rhs}"));
    }

    let total: i64 = d.behavior.values().map(|b| b.degree()).sum();
    if total != 0 {
        report.push("C2", format!("covering degrees sum to {total}"));
    }
    for (label, b) in &d.behavior {
        if *b == BoundaryBehavior::Covering(0) {
            report.push("C3", format!("covering on {label} has degree 0"));
        }
    }

    if report.ok() && d.class_vector().iter().all(|&x| x == 0) {
        let real = validate_real(&d.as_real());
        for v in real.violations {
            report.push("C4", format!("null-homotopic map fails {}: {}", v.rule, v.detail));
        }
    }
    report
}

fn connected_or_invalid(report: &mut ValidationReport, sig: &SurfaceSig) {
    if !sig.is_connected() {
        report.push("connected", "deciders require a connected surface");
    }
}

/// Path-component decider for functions into the interval on a surface
/// with corners: equal critical counts and equal signs on plain circles.
pub fn same_component_real(f: &RealMorseDescriptor, g: &RealMorseDescriptor) -> Result<bool> {
    if f.sig != g.sig {
        return Err(Error::SignatureMismatch);
    }
    for d in [f, g] {
        let mut report = validate_real(d);
        connected_or_invalid(&mut report, &d.sig);
        if !report.ok() {
            return Err(Error::InvalidDescriptor(report));
        }
    }
    Ok(f.c == g.c && f.eps == g.eps)
}

/// Path-component decider for circle-valued maps with constant or covering
/// boundary restrictions.
pub fn same_component_circle(
    f: &CircleMorseDescriptor,
    g: &CircleMorseDescriptor,
) -> Result<bool> {
    if f.sig != g.sig {
        return Err(Error::SignatureMismatch);
    }
    for d in [f, g] {
        let mut report = validate_circle(d);
        connected_or_invalid(&mut report, &d.sig);
        if !report.ok() {
            return Err(Error::InvalidDescriptor(report));
        }
    }
    if f.class_vector() != g.class_vector() || f.c != g.c {
        return Ok(false);
    }
    // Equal class vectors force the same set of constant components.
    let signs_agree = f.behavior.iter().all(|(label, b)| match (b, g.behavior.get(label)) {
        (BoundaryBehavior::Constant(s), Some(BoundaryBehavior::Constant(t))) => s == t,
        _ => true,
    });
    Ok(signs_agree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(genus: u32, ks: &[(&str, u32)]) -> SurfaceSig {
        SurfaceSig::connected(
            genus,
            ks.iter().map(|(l, k)| BoundaryComponent::new(*l, *k)).collect(),
        )
    }

    fn eps(pairs: &[(&str, Sign)]) -> BTreeMap<String, Sign> {
        pairs.iter().map(|(l, s)| (l.to_string(), *s)).collect()
    }

    fn circle(
        sig: SurfaceSig,
        c: [u32; 3],
        behavior: &[(&str, BoundaryBehavior)],
        windings: Vec<i64>,
    ) -> CircleMorseDescriptor {
        CircleMorseDescriptor {
            sig,
            c,
            behavior: behavior.iter().map(|(l, b)| (l.to_string(), *b)).collect(),
            windings,
        }
    }

    #[test]
    fn euler_characteristic_examples() {
        assert_eq!(euler_characteristic(&sig(0, &[("a", 0)])), 1);
        assert_eq!(euler_characteristic(&sig(1, &[])), 0);
        assert_eq!(
            euler_characteristic(&sig(2, &[("a", 0), ("b", 0), ("c", 0)])),
            -5
        );
        let two = SurfaceSig {
            genus: 0,
            boundary: vec![],
            components: 2,
        };
        assert_eq!(euler_characteristic(&two), 4);
    }

    #[test]
    fn validate_real_examples() {
        let disk = RealMorseDescriptor::new(sig(0, &[("a", 0)]), [1, 0, 0], eps(&[("a", Sign::Plus)]));
        assert!(validate_real(&disk).ok());

        let two_squares = RealMorseDescriptor::new(
            sig(0, &[("a", 1), ("b", 1)]),
            [0, 0, 0],
            BTreeMap::new(),
        );
        let r = validate_real(&two_squares);
        assert!(r.has("E1"), "{r}");

        let annulus = RealMorseDescriptor::new(
            sig(0, &[("a", 0), ("b", 0)]),
            [0, 0, 0],
            eps(&[("a", Sign::Minus), ("b", Sign::Plus)]),
        );
        assert!(validate_real(&annulus).ok());
    }

    #[test]
    fn validate_real_rejects_missing_extrema_and_bad_keys() {
        let no_max = RealMorseDescriptor::new(
            sig(0, &[("a", 0), ("b", 0)]),
            [0, 0, 0],
            eps(&[("a", Sign::Minus), ("b", Sign::Minus)]),
        );
        assert!(validate_real(&no_max).has("E3"));
        let missing = RealMorseDescriptor::new(sig(0, &[("a", 0)]), [1, 0, 0], BTreeMap::new());
        assert!(validate_real(&missing).has("E2"));
        let dup = RealMorseDescriptor::new(sig(0, &[("a", 1), ("a", 1)]), [0, 0, 0], BTreeMap::new());
        assert!(validate_real(&dup).has("S0"));
    }

    #[test]
    fn validate_circle_examples() {
        let torus = circle(sig(1, &[]), [0, 0, 0], &[], vec![1, 0]);
        assert!(validate_circle(&torus).ok());
        let annulus = circle(
            sig(0, &[("a", 0), ("b", 0)]),
            [0, 0, 0],
            &[("a", BoundaryBehavior::Covering(1)), ("b", BoundaryBehavior::Covering(-1))],
            vec![],
        );
        assert!(validate_circle(&annulus).ok());
        let bad = circle(
            sig(0, &[("a", 0), ("b", 0)]),
            [0, 0, 0],
            &[("a", BoundaryBehavior::Covering(1)), ("b", BoundaryBehavior::Covering(1))],
            vec![],
        );
        assert!(validate_circle(&bad).has("C2"));
    }

    #[test]
    fn null_homotopic_circle_map_needs_extrema() {
        let torus = circle(sig(1, &[]), [0, 0, 0], &[], vec![0, 0]);
        assert!(validate_circle(&torus).has("C4"));
        let zero_cover = circle(
            sig(0, &[("a", 0), ("b", 0)]),
            [0, 0, 0],
            &[("a", BoundaryBehavior::Covering(0)), ("b", BoundaryBehavior::Covering(0))],
            vec![],
        );
        assert!(validate_circle(&zero_cover).has("C3"));
    }

    #[test]
    fn same_component_real_examples() {
        let pants = sig(0, &[("a", 0), ("b", 0), ("c", 0)]);
        let f = RealMorseDescriptor::new(
            pants.clone(),
            [0, 1, 0],
            eps(&[("a", Sign::Minus), ("b", Sign::Minus), ("c", Sign::Plus)]),
        );
        let g = RealMorseDescriptor::new(
            pants,
            [0, 1, 0],
            eps(&[("a", Sign::Minus), ("b", Sign::Plus), ("c", Sign::Minus)]),
        );
        assert!(same_component_real(&f, &f).unwrap());
        assert!(!same_component_real(&f, &g).unwrap());

        let holed_torus = sig(1, &[("a", 1)]);
        let f = RealMorseDescriptor::new(holed_torus.clone(), [0, 2, 0], BTreeMap::new());
        let g = RealMorseDescriptor::new(holed_torus.clone(), [1, 3, 0], BTreeMap::new());
        assert!(!same_component_real(&f, &g).unwrap());
        // chi = -1 rules out (0,3,0) and (1,4,0)
        let f = RealMorseDescriptor::new(holed_torus.clone(), [0, 3, 0], BTreeMap::new());
        let g = RealMorseDescriptor::new(holed_torus, [1, 4, 0], BTreeMap::new());
        assert!(matches!(same_component_real(&f, &g), Err(Error::InvalidDescriptor(_))));
    }

    #[test]
    fn deciders_report_errors() {
        let f = RealMorseDescriptor::new(sig(0, &[("a", 0)]), [1, 0, 0], eps(&[("a", Sign::Plus)]));
        let g = RealMorseDescriptor::new(sig(0, &[("b", 0)]), [1, 0, 0], eps(&[("b", Sign::Plus)]));
        assert_eq!(same_component_real(&f, &g), Err(Error::SignatureMismatch));
        let bad = RealMorseDescriptor::new(sig(0, &[("a", 0)]), [2, 0, 0], eps(&[("a", Sign::Plus)]));
        assert!(matches!(
            same_component_real(&f, &bad),
            Err(Error::InvalidDescriptor(_))
        ));
    }

    #[test]
    fn same_component_circle_examples() {
        use BoundaryBehavior::*;
        let annulus = sig(0, &[("a", 0), ("b", 0)]);
        let f = circle(annulus.clone(), [0, 0, 0], &[("a", Covering(1)), ("b", Covering(-1))], vec![]);
        let g = circle(annulus, [0, 0, 0], &[("a", Covering(2)), ("b", Covering(-2))], vec![]);
        assert!(!same_component_circle(&f, &g).unwrap());

        let pants = sig(0, &[("a", 0), ("b", 0), ("c", 0)]);
        let behavior = [
            ("a", Constant(Sign::Minus)),
            ("b", Constant(Sign::Minus)),
            ("c", Constant(Sign::Plus)),
        ];
        let f = circle(pants.clone(), [0, 1, 0], &behavior, vec![]);
        let g = circle(pants, [0, 1, 0], &behavior, vec![]);
        assert!(same_component_circle(&f, &g).unwrap());

        let disk = sig(0, &[("a", 0)]);
        let f = circle(disk.clone(), [1, 0, 0], &[("a", Constant(Sign::Plus))], vec![]);
        let g = circle(disk, [0, 0, 1], &[("a", Constant(Sign::Minus))], vec![]);
        assert!(!same_component_circle(&f, &g).unwrap());
    }
}
