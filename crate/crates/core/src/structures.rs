//! Classes of sets over a finite universe of at most 16 atoms.
//!
//! Subsets are bitmasks. Families can be checked against the semiring, ring,
//! algebra, σ-algebra, Dynkin and π-system axioms, and the least family of a
//! given kind containing a generator can be computed by fixpoint iteration.
//! On a finite universe a countable union has only finitely many distinct
//! members, so σ-closure coincides with closure under pairwise unions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub const MAX_ATOMS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("universe has {0} atoms; at most {MAX_ATOMS} are supported")]
    UniverseTooLarge(usize),
    #[error("universe must contain at least one atom")]
    EmptyUniverse,
    #[error("duplicate atom {0:?}")]
    DuplicateAtom(String),
    #[error("invalid atom label {0:?}")]
    InvalidAtom(String),
    #[error("unknown atom {0:?}")]
    UnknownAtom(String),
    #[error("malformed subset {0:?}")]
    MalformedSubset(String),
    #[error("unknown class kind {0:?}")]
    UnknownKind(String),
    #[error("mask {0:#b} does not fit the universe")]
    MaskOutOfRange(u32),
}

/// An ordered list of distinct atom labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteUniverse {
    atoms: Vec<String>,
}

impl FiniteUniverse {
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = S>) -> Result<Self, StructureError> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(StructureError::EmptyUniverse);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(StructureError::UniverseTooLarge(atoms.len()));
        }
        for (i, a) in atoms.iter().enumerate() {
            let valid = !a.is_empty()
                && a.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.');
            if !valid {
                return Err(StructureError::InvalidAtom(a.clone()));
            }
            if atoms[..i].contains(a) {
                return Err(StructureError::DuplicateAtom(a.clone()));
            }
        }
        Ok(FiniteUniverse { atoms })
    }

    /// Atoms named `a0, a1, ...`.
    pub fn numbered(n: usize) -> Result<Self, StructureError> {
        Self::new((0..n).map(|i| format!("a{i}")))
    }

    /// Parses a comma-separated label list such as `a,b,c`.
    pub fn parse_csv(text: &str) -> Result<Self, StructureError> {
        Self::new(text.split(',').map(str::trim))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask(((1u64 << self.atoms.len()) - 1) as u32)
    }

    /// Number of subsets, `2^n`.
    pub fn subset_count(&self) -> usize {
        1usize << self.atoms.len()
    }

    pub fn all_subsets(&self) -> impl Iterator<Item = SubsetMask> {
        (0..self.subset_count() as u32).map(SubsetMask)
    }

    pub fn atom_index(&self, label: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == label)
    }

    pub fn contains_mask(&self, m: SubsetMask) -> bool {
        m.0 & !self.full().0 == 0
    }

    /// Parses `{}` or `{a,b}`.
    pub fn parse_subset(&self, text: &str) -> Result<SubsetMask, StructureError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| StructureError::MalformedSubset(t.to_string()))?;
        let mut bits = 0u32;
        for label in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let i = self
                .atom_index(label)
                .ok_or_else(|| StructureError::UnknownAtom(label.to_string()))?;
            bits |= 1 << i;
        }
        Ok(SubsetMask(bits))
    }

    pub fn format_subset(&self, m: SubsetMask) -> String {
        let labels: Vec<&str> = self
            .atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| m.contains(*i))
            .map(|(_, a)| a.as_str())
            .collect();
        format!("{{{}}}", labels.join(","))
    }
}

impl fmt::Display for FiniteUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.atoms.join(","))
    }
}

/// A subset of a finite universe; bit `i` stands for atom `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn singleton(atom: usize) -> Self {
        SubsetMask(1 << atom)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }

    pub fn is_subset(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: SubsetMask) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn inter(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn diff(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    pub fn complement_in(self, full: SubsetMask) -> Self {
        SubsetMask(full.0 & !self.0)
    }

    pub fn atoms(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.contains(*i))
    }

    /// All subsets of `self`, including `self` and the empty set.
    pub fn submasks(self) -> impl Iterator<Item = SubsetMask> {
        let full = self.0;
        let mut next = Some(full);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 { None } else { Some((cur - 1) & full) };
            Some(SubsetMask(cur))
        })
    }
}

/// A deduplicated family of subsets, kept in increasing mask order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFamily {
    universe: FiniteUniverse,
    members: Vec<SubsetMask>,
}

impl FiniteFamily {
    pub fn new(
        universe: FiniteUniverse,
        members: impl IntoIterator<Item = SubsetMask>,
    ) -> Result<Self, StructureError> {
        let mut members: Vec<SubsetMask> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|m| !universe.contains_mask(**m)) {
            return Err(StructureError::MaskOutOfRange(bad.0));
        }
        members.sort_unstable();
        members.dedup();
        Ok(FiniteFamily { universe, members })
    }

    pub(crate) fn from_sorted(universe: FiniteUniverse, members: Vec<SubsetMask>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        FiniteFamily { universe, members }
    }

    pub fn empty(universe: FiniteUniverse) -> Self {
        FiniteFamily {
            universe,
            members: Vec::new(),
        }
    }

    pub fn powerset(universe: FiniteUniverse) -> Self {
        let members = universe.all_subsets().collect();
        FiniteFamily { universe, members }
    }

    /// Parses `{};{a};{b,c}`. An empty string is the empty family.
    pub fn parse(universe: FiniteUniverse, text: &str) -> Result<Self, StructureError> {
        let mut masks = Vec::new();
        for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            masks.push(universe.parse_subset(part)?);
        }
        Self::new(universe, masks)
    }

    pub fn universe(&self) -> &FiniteUniverse {
        &self.universe
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: SubsetMask) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    pub fn is_subfamily(&self, other: &FiniteFamily) -> bool {
        self.members.iter().all(|m| other.contains(*m))
    }

    pub fn with(&self, extra: impl IntoIterator<Item = SubsetMask>) -> FiniteFamily {
        let mut members = self.members.clone();
        members.extend(extra);
        members.sort_unstable();
        members.dedup();
        FiniteFamily {
            universe: self.universe.clone(),
            members,
        }
    }

    pub fn format_member(&self, m: SubsetMask) -> String {
        self.universe.format_subset(m)
    }
}

impl fmt::Display for FiniteFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            f.write_str(&self.universe.format_subset(*m))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Semiring,
    Ring,
    Algebra,
    SigmaAlgebra,
    Dynkin,
    PiSystem,
}

impl ClassKind {
    pub const ALL: [ClassKind; 6] = [
        ClassKind::Semiring,
        ClassKind::Ring,
        ClassKind::Algebra,
        ClassKind::SigmaAlgebra,
        ClassKind::Dynkin,
        ClassKind::PiSystem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassKind::Semiring => "semiring",
            ClassKind::Ring => "ring",
            ClassKind::Algebra => "algebra",
            ClassKind::SigmaAlgebra => "sigma_algebra",
            ClassKind::Dynkin => "dynkin",
            ClassKind::PiSystem => "pi_system",
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassKind {
    type Err = StructureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        ClassKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| StructureError::UnknownKind(s.to_string()))
    }
}

/// A concrete witness that a closure axiom fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingEmpty,
    MissingFull,
    NoNonemptyMember,
    Intersection { a: SubsetMask, b: SubsetMask, missing: SubsetMask },
    Union { a: SubsetMask, b: SubsetMask, missing: SubsetMask },
    /// `a \ b` is not a disjoint union of members.
    Difference { a: SubsetMask, b: SubsetMask, diff: SubsetMask },
    Complement { a: SubsetMask, missing: SubsetMask },
    DisjointUnion { a: SubsetMask, b: SubsetMask, missing: SubsetMask },
}

impl Violation {
    pub fn render(&self, u: &FiniteUniverse) -> String {
        let s = |m: &SubsetMask| u.format_subset(*m);
        match self {
            Violation::MissingEmpty => "empty set is not a member".into(),
            Violation::MissingFull => "full set is not a member".into(),
            Violation::NoNonemptyMember => "family has no nonempty member".into(),
            Violation::Intersection { a, b, missing } => {
                format!("({},{}) intersection {} is not a member", s(a), s(b), s(missing))
            }
            Violation::Union { a, b, missing } => {
                format!("({},{}) union {} is not a member", s(a), s(b), s(missing))
            }
            Violation::Difference { a, b, diff } => format!(
                "({},{}) difference {} is not a disjoint union of members",
                s(a),
                s(b),
                s(diff)
            ),
            Violation::Complement { a, missing } => {
                format!("({}) complement {} is not a member", s(a), s(missing))
            }
            Violation::DisjointUnion { a, b, missing } => format!(
                "({},{}) disjoint union {} is not a member",
                s(a),
                s(b),
                s(missing)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub kind: ClassKind,
    pub holds: bool,
    pub violations: Vec<Violation>,
}

const MAX_WITNESSES: usize = 32;

struct Checker<'a> {
    family: &'a FiniteFamily,
    violations: Vec<Violation>,
    cover_memo: HashMap<u32, bool>,
}

impl Checker<'_> {
    fn full(&self) -> bool {
        self.violations.len() >= MAX_WITNESSES
    }

    fn push(&mut self, v: Violation) {
        if !self.full() {
            self.violations.push(v);
        }
    }

    fn has(&self, m: SubsetMask) -> bool {
        self.family.contains(m)
    }

    fn require_empty(&mut self) {
        if !self.has(SubsetMask::EMPTY) {
            self.push(Violation::MissingEmpty);
        }
    }

    fn require_full(&mut self) {
        if !self.has(self.family.universe.full()) {
            self.push(Violation::MissingFull);
        }
    }

    fn pairs<F: FnMut(&mut Self, SubsetMask, SubsetMask)>(&mut self, ordered: bool, mut f: F) {
        let members = self.family.members.clone();
        for (i, &a) in members.iter().enumerate() {
            let tail = if ordered { &members[..] } else { &members[i..] };
            for &b in tail {
                if self.full() {
                    return;
                }
                f(self, a, b);
            }
        }
    }

    fn intersections(&mut self) {
        self.pairs(false, |c, a, b| {
            let m = a.inter(b);
            if !c.has(m) {
                c.push(Violation::Intersection { a, b, missing: m });
            }
        });
    }

    fn unions(&mut self) {
        self.pairs(false, |c, a, b| {
            let m = a.union(b);
            if !c.has(m) {
                c.push(Violation::Union { a, b, missing: m });
            }
        });
    }

    fn differences(&mut self) {
        self.pairs(true, |c, a, b| {
            let d = a.diff(b);
            if !c.has(d) && !c.disjoint_cover(d.0) {
                c.push(Violation::Difference { a, b, diff: d });
            }
        });
    }

    fn complements(&mut self) {
        let full = self.family.universe.full();
        for &a in &self.family.members.clone() {
            let m = a.complement_in(full);
            if !self.has(m) {
                self.push(Violation::Complement { a, missing: m });
            }
        }
    }

    fn disjoint_unions(&mut self) {
        self.pairs(false, |c, a, b| {
            if a.is_disjoint(b) && !c.has(a.union(b)) {
                c.push(Violation::DisjointUnion { a, b, missing: a.union(b) });
            }
        });
    }

    /// Exact cover of `target` by pairwise disjoint members: backtracking on
    /// the lowest uncovered atom, memoized by remaining target.
    fn disjoint_cover(&mut self, target: u32) -> bool {
        if target == 0 {
            return true;
        }
        if let Some(&known) = self.cover_memo.get(&target) {
            return known;
        }
        let low = target & target.wrapping_neg();
        let candidates: Vec<u32> = self
            .family
            .members
            .iter()
            .map(|m| m.0)
            .filter(|&m| m & low != 0 && m & !target == 0)
            .collect();
        let found = candidates.into_iter().any(|m| self.disjoint_cover(target & !m));
        self.cover_memo.insert(target, found);
        found
    }
}

/// Checks `family` against the axioms of `kind`, collecting up to 32 witnesses.
pub fn check_class(kind: ClassKind, family: &FiniteFamily) -> ClassReport {
    let mut c = Checker {
        family,
        violations: Vec::new(),
        cover_memo: HashMap::new(),
    };
    match kind {
        ClassKind::Semiring | ClassKind::Ring | ClassKind::Algebra | ClassKind::SigmaAlgebra => {
            c.require_empty();
            if kind != ClassKind::Semiring && kind != ClassKind::Ring {
                c.require_full();
            }
            c.intersections();
            if kind != ClassKind::Semiring {
                c.unions();
            }
            c.differences();
        }
        ClassKind::Dynkin => {
            c.require_full();
            c.complements();
            c.disjoint_unions();
        }
        ClassKind::PiSystem => {
            if family.members.iter().all(|m| m.is_empty()) {
                c.push(Violation::NoNonemptyMember);
            }
            c.intersections();
        }
    }
    ClassReport {
        kind,
        holds: c.violations.is_empty(),
        violations: c.violations,
    }
}

/// Smallest family of the given kind containing `generators`.
///
/// Semirings have no least element in general (an intersection of semirings
/// need not be one), so a semiring request yields the generated ring. A
/// π-system request yields the closure under pairwise intersection.
pub fn generate_closure(kind: ClassKind, generators: &FiniteFamily) -> FiniteFamily {
    let universe = generators.universe.clone();
    let full = universe.full();
    let mut seen = vec![false; universe.subset_count()];
    let mut list: Vec<SubsetMask> = Vec::new();
    let mut add = |m: SubsetMask, list: &mut Vec<SubsetMask>| {
        if !seen[m.0 as usize] {
            seen[m.0 as usize] = true;
            list.push(m);
        }
    };
    for &g in &generators.members {
        add(g, &mut list);
    }
    let kind = match kind {
        ClassKind::Semiring => ClassKind::Ring,
        k => k,
    };
    match kind {
        ClassKind::PiSystem => {}
        ClassKind::Ring => add(SubsetMask::EMPTY, &mut list),
        ClassKind::Dynkin => add(full, &mut list),
        _ => {
            add(SubsetMask::EMPTY, &mut list);
            add(full, &mut list);
        }
    }
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        if !matches!(kind, ClassKind::Ring | ClassKind::PiSystem) {
            add(x.complement_in(full), &mut list);
        }
        for j in 0..=i {
            let y = list[j];
            match kind {
                ClassKind::PiSystem => add(x.inter(y), &mut list),
                ClassKind::Dynkin => {
                    if x.is_disjoint(y) {
                        add(x.union(y), &mut list);
                    }
                }
                _ => {
                    add(x.union(y), &mut list);
                    add(x.diff(y), &mut list);
                    add(y.diff(x), &mut list);
                }
            }
        }
        i += 1;
    }
    list.sort_unstable();
    FiniteFamily::from_sorted(universe, list)
}

/// True iff the blocks are pairwise disjoint.
pub fn is_triv_iset(blocks: &[SubsetMask]) -> bool {
    let mut seen = 0u32;
    for b in blocks {
        if b.0 & seen != 0 {
            return false;
        }
        seen |= b.0;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(atoms: &str, text: &str) -> FiniteFamily {
        FiniteFamily::parse(FiniteUniverse::parse_csv(atoms).unwrap(), text).unwrap()
    }

    #[test]
    fn parse_and_print_family() {
        let f = fam("a,b,c", "{b,c};{};{a};{a}");
        assert_eq!(f.len(), 3);
        assert_eq!(f.to_string(), "{};{a};{b,c}");
        assert!(FiniteFamily::parse(FiniteUniverse::parse_csv("a").unwrap(), "{z}").is_err());
        assert!(FiniteUniverse::parse_csv("a,a").is_err());
        assert!(FiniteUniverse::numbered(17).is_err());
    }

    #[test]
    fn powerset_is_sigma_algebra() {
        let f = fam("a,b", "{};{a};{b};{a,b}");
        for kind in ClassKind::ALL {
            assert!(check_class(kind, &f).holds, "{kind}");
        }
    }

    #[test]
    fn semiring_difference_without_cover() {
        let f = fam("a,b", "{};{a};{a,b}");
        let r = check_class(ClassKind::Semiring, &f);
        assert!(!r.holds);
        assert_eq!(
            r.violations,
            vec![Violation::Difference {
                a: SubsetMask(0b11),
                b: SubsetMask(0b01),
                diff: SubsetMask(0b10)
            }]
        );
        assert_eq!(
            r.violations[0].render(f.universe()),
            "({a,b},{a}) difference {b} is not a disjoint union of members"
        );
    }

    #[test]
    fn semiring_accepts_disjoint_cover() {
        // {a,b,c} \ {b} = {a} ∪ {c}
        let f = fam("a,b,c", "{};{a};{b};{c};{a,b,c}");
        assert!(check_class(ClassKind::Semiring, &f).holds);
        assert!(!check_class(ClassKind::Ring, &f).holds);
    }

    #[test]
    fn pi_system_needs_a_nonempty_member() {
        let f = fam("a", "{}");
        let r = check_class(ClassKind::PiSystem, &f);
        assert_eq!(r.violations, vec![Violation::NoNonemptyMember]);
    }

    #[test]
    fn closures() {
        let g = fam("a,b,c", "{a};{b}");
        assert_eq!(
            generate_closure(ClassKind::Ring, &g).to_string(),
            "{};{a};{b};{a,b}"
        );
        let sigma = generate_closure(ClassKind::SigmaAlgebra, &g);
        assert_eq!(sigma.len(), 8);
        let empty = fam("a,b", "");
        assert_eq!(generate_closure(ClassKind::Ring, &empty).to_string(), "{}");
        let d = generate_closure(ClassKind::Dynkin, &g);
        assert!(check_class(ClassKind::Dynkin, &d).holds);
    }

    #[test]
    fn triv_iset() {
        assert!(is_triv_iset(&[SubsetMask(1), SubsetMask(2)]));
        assert!(!is_triv_iset(&[SubsetMask(1), SubsetMask(3)]));
        assert!(is_triv_iset(&[]));
    }

    #[test]
    fn submasks_enumerates_all() {
        let subs: Vec<_> = SubsetMask(0b101).submasks().collect();
        assert_eq!(subs, vec![SubsetMask(5), SubsetMask(4), SubsetMask(1), SubsetMask(0)]);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ClassKind::ALL {
            assert_eq!(k.name().parse::<ClassKind>().unwrap(), k);
        }
        assert_eq!("sigma-algebra".parse::<ClassKind>().unwrap(), ClassKind::SigmaAlgebra);
    }
}
