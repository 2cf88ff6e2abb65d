//! Set functions on finite universes: measure and outer-measure axiom
//! checks, the cover-infimum outer measure, Carathéodory-measurable sets,
//! completeness, σ-finiteness and uniqueness of extensions.
//!
//! Everything is exact. Checks that would enumerate more than
//! [`EXHAUSTIVE_LIMIT`] cases fall back to seeded random sampling and say so
//! in their report.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::structures::{
    check_class, generate_closure, ClassKind, FiniteFamily, FiniteUniverse, StructureError,
    SubsetMask,
};
use crate::xreal::XReal;

pub const EXHAUSTIVE_LIMIT: usize = 1_000_000;
pub const SAMPLE_COUNT: usize = 20_000;
pub const SAMPLE_SEED: u64 = 0x5eed_cafe;
pub const MAX_COVER_FAMILY: usize = 20;
pub const MAX_OUTER_ATOMS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A possibly partial map from subsets to extended rationals.
pub trait SetFunction {
    fn universe(&self) -> &FiniteUniverse;
    fn value(&self, set: SubsetMask) -> Option<XReal>;
}

/// Point masses on the atoms of a finite universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMeasure {
    universe: FiniteUniverse,
    weights: Vec<XReal>,
    domain: FiniteFamily,
}

impl WeightMeasure {
    /// Weights declared on the full powerset.
    pub fn new(universe: FiniteUniverse, weights: Vec<XReal>) -> Result<Self, MeasureError> {
        let domain = FiniteFamily::powerset(universe.clone());
        Self::with_domain(universe, weights, domain)
    }

    pub fn with_domain(
        universe: FiniteUniverse,
        weights: Vec<XReal>,
        domain: FiniteFamily,
    ) -> Result<Self, MeasureError> {
        if weights.len() != universe.len() {
            return Err(MeasureError::Domain(format!(
                "{} weights for {} atoms",
                weights.len(),
                universe.len()
            )));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_nonneg()) {
            return Err(MeasureError::Domain(format!(
                "weight of {} is negative: {w}",
                universe.atoms()[i]
            )));
        }
        Ok(WeightMeasure {
            universe,
            weights,
            domain,
        })
    }

    /// Parses `atom weight` lines; `#` starts a comment, unlisted atoms weigh 0.
    pub fn parse(universe: FiniteUniverse, text: &str) -> Result<Self, MeasureError> {
        let mut weights = vec![XReal::zero(); universe.len()];
        for (line, atom, value) in fixture_lines(text)? {
            let i = universe
                .atom_index(atom)
                .ok_or_else(|| MeasureError::Parse {
                    line,
                    message: format!("unknown atom {atom:?}"),
                })?;
            weights[i] = value;
        }
        Self::new(universe, weights)
    }

    pub fn weights(&self) -> &[XReal] {
        &self.weights
    }

    pub fn domain(&self) -> &FiniteFamily {
        &self.domain
    }

    /// Sum of member-atom weights; defined for every subset.
    pub fn eval(&self, set: SubsetMask) -> XReal {
        set.atoms()
            .filter(|&i| i < self.weights.len())
            .fold(XReal::zero(), |acc, i| acc + self.weights[i].clone())
    }
}

impl SetFunction for WeightMeasure {
    fn universe(&self) -> &FiniteUniverse {
        &self.universe
    }

    fn value(&self, set: SubsetMask) -> Option<XReal> {
        Some(self.eval(set))
    }
}

/// An explicit table of set-function values, possibly partial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetTable {
    universe: FiniteUniverse,
    values: BTreeMap<SubsetMask, XReal>,
}

impl SetTable {
    pub fn new(universe: FiniteUniverse) -> Self {
        SetTable {
            universe,
            values: BTreeMap::new(),
        }
    }

    pub fn from_fn<F: FnMut(SubsetMask) -> XReal>(family: &FiniteFamily, mut f: F) -> Self {
        let values = family.members().iter().map(|&m| (m, f(m))).collect();
        SetTable {
            universe: family.universe().clone(),
            values,
        }
    }

    pub fn restrict<M: SetFunction + ?Sized>(mu: &M, family: &FiniteFamily) -> Self {
        let values = family
            .members()
            .iter()
            .filter_map(|&m| mu.value(m).map(|v| (m, v)))
            .collect();
        SetTable {
            universe: family.universe().clone(),
            values,
        }
    }

    /// Parses `subset value` lines such as `{a,b} 3/2`.
    pub fn parse(universe: FiniteUniverse, text: &str) -> Result<Self, MeasureError> {
        let mut table = SetTable::new(universe);
        for (line, subset, value) in fixture_lines(text)? {
            let m = table
                .universe
                .parse_subset(subset)
                .map_err(|e| MeasureError::Parse {
                    line,
                    message: e.to_string(),
                })?;
            table.values.insert(m, value);
        }
        Ok(table)
    }

    pub fn set(&mut self, set: SubsetMask, value: XReal) {
        self.values.insert(set, value);
    }

    pub fn entries(&self) -> impl Iterator<Item = (SubsetMask, &XReal)> {
        self.values.iter().map(|(m, v)| (*m, v))
    }

    pub fn domain(&self) -> FiniteFamily {
        FiniteFamily::from_sorted(self.universe.clone(), self.values.keys().copied().collect())
    }
}

impl SetFunction for SetTable {
    fn universe(&self) -> &FiniteUniverse {
        &self.universe
    }

    fn value(&self, set: SubsetMask) -> Option<XReal> {
        self.values.get(&set).cloned()
    }
}

fn fixture_lines(text: &str) -> Result<Vec<(usize, &str, XReal)>, MeasureError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| MeasureError::Parse {
                line,
                message: format!("expected `<key> <value>`, found {content:?}"),
            })?;
        let value: XReal = value.parse().map_err(|e| MeasureError::Parse {
            line,
            message: format!("{e}"),
        })?;
        out.push((line, key.trim(), value));
    }
    Ok(out)
}

/// The outer measure of every subset of a finite universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterTable {
    universe: FiniteUniverse,
    values: Vec<XReal>,
}

impl OuterTable {
    pub fn new(universe: FiniteUniverse, values: Vec<XReal>) -> Result<Self, MeasureError> {
        if values.len() != universe.subset_count() {
            return Err(MeasureError::Domain(format!(
                "outer table needs {} values, got {}",
                universe.subset_count(),
                values.len()
            )));
        }
        Ok(OuterTable { universe, values })
    }

    /// Requires a value for every subset.
    pub fn from_table(table: &SetTable) -> Result<Self, MeasureError> {
        let values = table
            .universe
            .all_subsets()
            .map(|m| {
                table.value(m).ok_or_else(|| {
                    MeasureError::Domain(format!(
                        "table has no value for {}",
                        table.universe.format_subset(m)
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(table.universe.clone(), values)
    }

    pub fn get(&self, set: SubsetMask) -> &XReal {
        &self.values[set.0 as usize]
    }

    pub fn values(&self) -> &[XReal] {
        &self.values
    }
}

impl SetFunction for OuterTable {
    fn universe(&self) -> &FiniteUniverse {
        &self.universe
    }

    fn value(&self, set: SubsetMask) -> Option<XReal> {
        self.values.get(set.0 as usize).cloned()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive { cases: usize },
    Sampled { samples: usize, seed: u64 },
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckMode::Exhaustive { cases: 1 } => f.write_str("exhaustive (1 case)"),
            CheckMode::Exhaustive { cases } => write!(f, "exhaustive ({cases} cases)"),
            CheckMode::Sampled { samples, seed } => {
                write!(f, "sampled ({samples} samples, seed {seed:#x})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    Undefined { set: SubsetMask },
    EmptyNotZero { value: XReal },
    Negative { set: SubsetMask, value: XReal },
    NotAdditive { parts: Vec<SubsetMask>, union_value: XReal, parts_sum: XReal },
    NotMonotone { smaller: SubsetMask, larger: SubsetMask },
    NotSubadditive { a: SubsetMask, b: SubsetMask },
}

impl AxiomViolation {
    pub fn render(&self, u: &FiniteUniverse) -> String {
        let s = |m: &SubsetMask| u.format_subset(*m);
        match self {
            AxiomViolation::Undefined { set } => format!("no value for {}", s(set)),
            AxiomViolation::EmptyNotZero { value } => format!("value of {{}} is {value}, not 0"),
            AxiomViolation::Negative { set, value } => format!("value of {} is negative: {value}", s(set)),
            AxiomViolation::NotAdditive { parts, union_value, parts_sum } => format!(
                "({}) not additive: union has {union_value}, parts sum to {parts_sum}",
                parts.iter().map(s).collect::<Vec<_>>().join(",")
            ),
            AxiomViolation::NotMonotone { smaller, larger } => {
                format!("({},{}) not monotone", s(smaller), s(larger))
            }
            AxiomViolation::NotSubadditive { a, b } => {
                format!("({},{}) not subadditive", s(a), s(b))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub holds: bool,
    pub violations: Vec<AxiomViolation>,
    pub mode: CheckMode,
}

fn combine_modes(a: CheckMode, b: CheckMode) -> CheckMode {
    match (a, b) {
        (CheckMode::Exhaustive { cases: x }, CheckMode::Exhaustive { cases: y }) => {
            CheckMode::Exhaustive { cases: x + y }
        }
        (s @ CheckMode::Sampled { .. }, _) | (_, s @ CheckMode::Sampled { .. }) => s,
    }
}

/// Checks `mu(∅) = 0`, nonnegativity on `family`, and additivity over every
/// tuple of at least two pairwise disjoint members whose union is a member.
/// On a finite universe countable additivity reduces to this finite form.
pub fn check_measure_axioms<M: SetFunction + ?Sized>(mu: &M, family: &FiniteFamily) -> AxiomReport {
    let mut violations = Vec::new();
    match mu.value(SubsetMask::EMPTY) {
        Some(v) if !v.is_zero() => violations.push(AxiomViolation::EmptyNotZero { value: v }),
        Some(_) => {}
        None => violations.push(AxiomViolation::Undefined { set: SubsetMask::EMPTY }),
    }
    let mut members = Vec::new();
    let mut values = Vec::new();
    for &m in family.members() {
        match mu.value(m) {
            None => violations.push(AxiomViolation::Undefined { set: m }),
            Some(v) if !v.is_nonneg() => violations.push(AxiomViolation::Negative { set: m, value: v }),
            Some(v) => {
                if !m.is_empty() {
                    members.push(m);
                    values.push(v);
                }
            }
        }
    }

    let check_tuple = |parts: &[usize], union: SubsetMask, violations: &mut Vec<AxiomViolation>| {
        if parts.len() < 2 || !family.contains(union) {
            return;
        }
        let Some(union_value) = mu.value(union) else { return };
        let parts_sum = parts.iter().fold(XReal::zero(), |acc, &i| acc + values[i].clone());
        if union_value != parts_sum && violations.len() < 32 {
            violations.push(AxiomViolation::NotAdditive {
                parts: parts.iter().map(|&i| members[i]).collect(),
                union_value,
                parts_sum,
            });
        }
    };

    // Depth-first over disjoint tuples in increasing index order.
    let mut cases = 0usize;
    let mut stack: Vec<usize> = Vec::new();
    let mut unions: Vec<SubsetMask> = vec![SubsetMask::EMPTY];
    let mut next = 0usize;
    let mut exhausted = true;
    loop {
        if next < members.len() {
            let cur = *unions.last().unwrap_or(&SubsetMask::EMPTY);
            let cand = members[next];
            if cur.is_disjoint(cand) {
                stack.push(next);
                unions.push(cur.union(cand));
                cases += 1;
                if cases > EXHAUSTIVE_LIMIT {
                    exhausted = false;
                    break;
                }
                check_tuple(&stack, cur.union(cand), &mut violations);
            }
            next += 1;
        } else if let Some(last) = stack.pop() {
            unions.pop();
            next = last + 1;
        } else {
            break;
        }
    }

    let mode = if exhausted {
        CheckMode::Exhaustive { cases }
    } else {
        violations.retain(|v| !matches!(v, AxiomViolation::NotAdditive { .. }));
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        let mut order: Vec<usize> = (0..members.len()).collect();
        for _ in 0..SAMPLE_COUNT {
            order.shuffle(&mut rng);
            let target = rng.random_range(2..=members.len().max(2));
            let mut parts = Vec::new();
            let mut union = SubsetMask::EMPTY;
            for &i in &order {
                if parts.len() == target {
                    break;
                }
                if union.is_disjoint(members[i]) {
                    parts.push(i);
                    union = union.union(members[i]);
                }
            }
            parts.sort_unstable();
            check_tuple(&parts, union, &mut violations);
        }
        CheckMode::Sampled {
            samples: SAMPLE_COUNT,
            seed: SAMPLE_SEED,
        }
    };
    AxiomReport {
        holds: violations.is_empty(),
        violations,
        mode,
    }
}

/// The cover-infimum outer measure: for every subset `X`, the least total
/// `mu` over subfamilies of `family` whose union contains `X`, or `+inf`
/// when no subfamily covers `X`.
pub fn outer_extend<M: SetFunction + ?Sized>(mu: &M, family: &FiniteFamily) -> Result<OuterTable, MeasureError> {
    let universe = family.universe().clone();
    if family.len() > MAX_COVER_FAMILY {
        return Err(MeasureError::Resource(format!(
            "family has {} members; at most {MAX_COVER_FAMILY} are supported",
            family.len()
        )));
    }
    if universe.len() > MAX_OUTER_ATOMS {
        return Err(MeasureError::Resource(format!(
            "universe has {} atoms; at most {MAX_OUTER_ATOMS} are supported",
            universe.len()
        )));
    }
    let mut items = Vec::with_capacity(family.len());
    for &m in family.members() {
        let v = mu
            .value(m)
            .ok_or_else(|| MeasureError::Domain(format!("no value for {}", universe.format_subset(m))))?;
        if !v.is_nonneg() {
            return Err(MeasureError::Domain(format!(
                "value of {} is negative",
                universe.format_subset(m)
            )));
        }
        if m.is_empty() {
            if !v.is_zero() {
                return Err(MeasureError::Domain("value of {} is not 0".into()));
            }
        } else {
            items.push((m.0 as usize, v));
        }
    }

    // best[u]: least cost of a subfamily whose union is exactly u.
    let size = universe.subset_count();
    let mut best = vec![XReal::PosInf; size];
    best[0] = XReal::zero();
    for (mask, cost) in &items {
        let prev = best.clone();
        for (u, base) in prev.iter().enumerate() {
            if *base == XReal::PosInf {
                continue;
            }
            let cand = base + cost;
            let target = u | mask;
            if cand < best[target] {
                best[target] = cand;
            }
        }
    }
    // Covering X means the union is any superset of X.
    for bit in 0..universe.len() {
        let b = 1usize << bit;
        for m in 0..size {
            if m & b == 0 && best[m | b] < best[m] {
                best[m] = best[m | b].clone();
            }
        }
    }
    OuterTable::new(universe, best)
}

/// Checks `μ*(∅) = 0`, nonnegativity, monotonicity over all nested pairs and
/// subadditivity over all pairs.
pub fn check_outer_axioms(ot: &OuterTable) -> AxiomReport {
    let mut violations = Vec::new();
    let full = ot.universe.full();
    if !ot.get(SubsetMask::EMPTY).is_zero() {
        violations.push(AxiomViolation::EmptyNotZero {
            value: ot.get(SubsetMask::EMPTY).clone(),
        });
    }
    for m in ot.universe.all_subsets() {
        if !ot.get(m).is_nonneg() {
            violations.push(AxiomViolation::Negative {
                set: m,
                value: ot.get(m).clone(),
            });
        }
    }
    let mut mono_cases = 0usize;
    'mono: for larger in ot.universe.all_subsets() {
        for smaller in larger.submasks() {
            mono_cases += 1;
            if ot.get(smaller) > ot.get(larger) {
                violations.push(AxiomViolation::NotMonotone { smaller, larger });
                if violations.len() >= 32 {
                    break 'mono;
                }
            }
        }
    }
    let mono_mode = CheckMode::Exhaustive { cases: mono_cases };

    let n = ot.universe.subset_count();
    let pair_count = n * (n + 1) / 2;
    let subadditive = |a: SubsetMask, b: SubsetMask, violations: &mut Vec<AxiomViolation>| {
        if ot.get(a.union(b)) > &(ot.get(a) + ot.get(b)) && violations.len() < 32 {
            violations.push(AxiomViolation::NotSubadditive { a, b });
        }
    };
    let sub_mode = if pair_count <= EXHAUSTIVE_LIMIT {
        for a in 0..n as u32 {
            for b in a..n as u32 {
                subadditive(SubsetMask(a), SubsetMask(b), &mut violations);
            }
        }
        CheckMode::Exhaustive { cases: pair_count }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        for _ in 0..SAMPLE_COUNT {
            let a = SubsetMask(rng.random_range(0..=full.0));
            let b = SubsetMask(rng.random_range(0..=full.0));
            subadditive(a, b, &mut violations);
        }
        CheckMode::Sampled {
            samples: SAMPLE_COUNT,
            seed: SAMPLE_SEED,
        }
    };
    AxiomReport {
        holds: violations.is_empty(),
        violations,
        mode: combine_modes(mono_mode, sub_mode),
    }
}

/// All sets `A` splitting every `X` additively: `μ*(X) = μ*(X∩A) + μ*(X\A)`.
pub fn caratheodory_sets(ot: &OuterTable) -> Result<FiniteFamily, MeasureError> {
    if ot.universe.len() > MAX_OUTER_ATOMS {
        return Err(MeasureError::Resource(format!(
            "universe has {} atoms; at most {MAX_OUTER_ATOMS} are supported",
            ot.universe.len()
        )));
    }
    let members = ot
        .universe
        .all_subsets()
        .filter(|&a| {
            ot.universe
                .all_subsets()
                .all(|x| *ot.get(x) == ot.get(x.inter(a)) + ot.get(x.diff(a)))
        })
        .collect();
    Ok(FiniteFamily::from_sorted(ot.universe.clone(), members))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessReport {
    pub negligibles: Vec<SubsetMask>,
    pub complete: bool,
}

/// Negligible sets are the subsets of measurable null sets; the measure is
/// complete when all of them are measurable.
pub fn completeness_report<M: SetFunction + ?Sized>(mu: &M, family: &FiniteFamily) -> CompletenessReport {
    let mut negligibles: Vec<SubsetMask> = family
        .members()
        .iter()
        .filter(|&&m| mu.value(m).is_some_and(|v| v.is_zero()))
        .flat_map(|m| m.submasks())
        .collect();
    negligibles.sort_unstable();
    negligibles.dedup();
    let complete = negligibles.iter().all(|&n| family.contains(n));
    CompletenessReport { negligibles, complete }
}

/// True iff every cover element is a finite-measure member of `family` and
/// the cover exhausts the universe.
pub fn sigma_finite_check<M: SetFunction + ?Sized>(mu: &M, family: &FiniteFamily, cover: &[SubsetMask]) -> bool {
    let full = family.universe().full();
    let union = cover.iter().fold(SubsetMask::EMPTY, |acc, c| acc.union(*c));
    union == full
        && cover
            .iter()
            .all(|&c| family.contains(c) && mu.value(c).is_some_and(|v| v.is_finite()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessReport {
    pub agree_on_generators: bool,
    /// Whether the Dynkin closure of the generators equals their σ-algebra.
    pub dynkin_equals_sigma: bool,
    /// Sets compared in the generated σ-algebra.
    pub checked: usize,
    pub disagreement: Option<SubsetMask>,
}

impl UniquenessReport {
    pub fn agrees(&self) -> bool {
        self.disagreement.is_none()
    }
}

/// Compares two measures that agree on a π-system with a finite-measure
/// cover: agreement must then propagate to the whole generated σ-algebra.
/// The comparison runs over the Dynkin closure first, then the σ-algebra.
pub fn uniqueness_check<M1, M2>(mu1: &M1, mu2: &M2, generators: &FiniteFamily) -> Result<UniquenessReport, MeasureError>
where
    M1: SetFunction + ?Sized,
    M2: SetFunction + ?Sized,
{
    let u = generators.universe();
    if !check_class(ClassKind::PiSystem, generators).holds {
        return Err(MeasureError::Domain("generators are not a π-system".into()));
    }
    let finite_cover = |mu: &dyn Fn(SubsetMask) -> Option<XReal>| {
        generators
            .members()
            .iter()
            .filter(|&&m| mu(m).is_some_and(|v| v.is_finite()))
            .fold(SubsetMask::EMPTY, |acc, m| acc.union(*m))
            == u.full()
    };
    if !finite_cover(&|m| mu1.value(m)) || !finite_cover(&|m| mu2.value(m)) {
        return Err(MeasureError::Domain(
            "generators contain no finite-measure cover of the universe".into(),
        ));
    }
    let sigma = generate_closure(ClassKind::SigmaAlgebra, generators);
    for (name, report) in [
        ("first", check_measure_axioms(mu1, &sigma)),
        ("second", check_measure_axioms(mu2, &sigma)),
    ] {
        if !report.holds {
            return Err(MeasureError::Domain(format!(
                "{name} set function is not a measure on the generated σ-algebra: {}",
                report.violations[0].render(u)
            )));
        }
    }
    let differs = |m: SubsetMask| mu1.value(m) != mu2.value(m);
    if let Some(&m) = generators.members().iter().find(|&&m| differs(m)) {
        return Ok(UniquenessReport {
            agree_on_generators: false,
            dynkin_equals_sigma: false,
            checked: 0,
            disagreement: Some(m),
        });
    }
    let dynkin = generate_closure(ClassKind::Dynkin, generators);
    let dynkin_equals_sigma = dynkin == sigma;
    let disagreement = dynkin
        .members()
        .iter()
        .chain(sigma.members())
        .copied()
        .find(|&m| differs(m));
    Ok(UniquenessReport {
        agree_on_generators: true,
        dynkin_equals_sigma,
        checked: sigma.len(),
        disagreement,
    })
}

/// Whether the σ-algebra generated by a semiring lies inside the
/// Carathéodory sets of the outer measure built from `mu`, with the outer
/// measure agreeing with `mu` on the semiring.
pub fn sub_caratheodory_check<M: SetFunction + ?Sized>(semiring: &FiniteFamily, mu: &M) -> Result<bool, MeasureError> {
    let u = semiring.universe();
    let report = check_class(ClassKind::Semiring, semiring);
    if !report.holds {
        return Err(MeasureError::Domain(format!(
            "family is not a semiring: {}",
            report.violations[0].render(u)
        )));
    }
    let axioms = check_measure_axioms(mu, semiring);
    if !axioms.holds {
        return Err(MeasureError::Domain(format!(
            "set function is not a measure on the semiring: {}",
            axioms.violations[0].render(u)
        )));
    }
    let outer = outer_extend(mu, semiring)?;
    let cara = caratheodory_sets(&outer)?;
    let generated = generate_closure(ClassKind::SigmaAlgebra, semiring);
    let extends = semiring
        .members()
        .iter()
        .all(|&m| mu.value(m).as_ref() == Some(outer.get(m)));
    Ok(extends && generated.is_subfamily(&cara))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xreal::ratio;

    fn uni(s: &str) -> FiniteUniverse {
        FiniteUniverse::parse_csv(s).unwrap()
    }

    fn fam(u: &FiniteUniverse, s: &str) -> FiniteFamily {
        FiniteFamily::parse(u.clone(), s).unwrap()
    }

    fn one_one_one() -> OuterTable {
        OuterTable::new(uni("a,b"), vec![0.into(), 1.into(), 1.into(), 1.into()]).unwrap()
    }

    #[test]
    fn eval_point_masses() {
        let mu = WeightMeasure::new(uni("a,b"), vec![1.into(), 2.into()]).unwrap();
        assert_eq!(mu.eval(SubsetMask(0b11)), XReal::from(3));
        assert_eq!(mu.eval(SubsetMask::EMPTY), XReal::zero());
        let inf = WeightMeasure::new(uni("a"), vec![XReal::PosInf]).unwrap();
        assert_eq!(inf.eval(SubsetMask(1)), XReal::PosInf);
        assert!(WeightMeasure::new(uni("a"), vec![XReal::from(-1)]).is_err());
    }

    #[test]
    fn measure_axioms() {
        let u = uni("a,b");
        let mu = WeightMeasure::new(u.clone(), vec![1.into(), 2.into()]).unwrap();
        let r = check_measure_axioms(&mu, &FiniteFamily::powerset(u.clone()));
        assert!(r.holds);
        assert_eq!(r.mode, CheckMode::Exhaustive { cases: 4 });

        let mut nu = SetTable::restrict(&mu, &FiniteFamily::powerset(u.clone()));
        nu.set(SubsetMask::EMPTY, XReal::one());
        let r = check_measure_axioms(&nu, &FiniteFamily::powerset(u.clone()));
        assert_eq!(r.violations, vec![AxiomViolation::EmptyNotZero { value: XReal::one() }]);

        nu.set(SubsetMask::EMPTY, XReal::zero());
        nu.set(SubsetMask(0b11), 5.into());
        let r = check_measure_axioms(&nu, &FiniteFamily::powerset(u));
        assert_eq!(
            r.violations,
            vec![AxiomViolation::NotAdditive {
                parts: vec![SubsetMask(1), SubsetMask(2)],
                union_value: 5.into(),
                parts_sum: 3.into()
            }]
        );
    }

    #[test]
    fn outer_extension_of_additive_measure_is_eval() {
        let u = uni("a,b");
        let mu = WeightMeasure::new(u.clone(), vec![1.into(), 2.into()]).unwrap();
        let ot = outer_extend(&mu, &FiniteFamily::powerset(u.clone())).unwrap();
        for m in u.all_subsets() {
            assert_eq!(ot.get(m), &mu.eval(m));
        }
    }

    #[test]
    fn outer_extension_without_cover_is_infinite() {
        let u = uni("a,b");
        let s = fam(&u, "{};{a}");
        let mut mu = SetTable::new(u.clone());
        mu.set(SubsetMask::EMPTY, XReal::zero());
        mu.set(SubsetMask(1), XReal::one());
        let ot = outer_extend(&mu, &s).unwrap();
        assert_eq!(ot.get(SubsetMask(2)), &XReal::PosInf);
        assert_eq!(ot.get(SubsetMask::EMPTY), &XReal::zero());
        assert_eq!(ot.get(SubsetMask(1)), &XReal::one());
    }

    #[test]
    fn outer_axioms() {
        assert!(check_outer_axioms(&one_one_one()).holds);
        let bad = OuterTable::new(uni("a,b"), vec![0.into(), 2.into(), 0.into(), 1.into()]).unwrap();
        let r = check_outer_axioms(&bad);
        assert!(r.violations.contains(&AxiomViolation::NotMonotone {
            smaller: SubsetMask(1),
            larger: SubsetMask(3)
        }));
    }

    #[test]
    fn caratheodory_examples() {
        let cara = caratheodory_sets(&one_one_one()).unwrap();
        assert_eq!(cara.to_string(), "{};{a,b}");
        let zero = OuterTable::new(uni("a,b"), vec![XReal::zero(); 4]).unwrap();
        assert_eq!(caratheodory_sets(&zero).unwrap().len(), 4);
    }

    #[test]
    fn completeness() {
        let u = uni("a,b");
        let f = fam(&u, "{};{a,b}");
        let mut mu = SetTable::new(u.clone());
        mu.set(SubsetMask::EMPTY, XReal::zero());
        mu.set(SubsetMask(3), XReal::zero());
        let r = completeness_report(&mu, &f);
        assert!(!r.complete);
        assert_eq!(r.negligibles.len(), 4);

        let pos = WeightMeasure::new(u.clone(), vec![1.into(), 1.into()]).unwrap();
        let r = completeness_report(&pos, &f);
        assert_eq!(r.negligibles, vec![SubsetMask::EMPTY]);
        assert!(r.complete);
    }

    #[test]
    fn sigma_finite() {
        let u = uni("a,b");
        let p = FiniteFamily::powerset(u.clone());
        let mu = WeightMeasure::new(u.clone(), vec![1.into(), ratio(1, 2).into()]).unwrap();
        assert!(sigma_finite_check(&mu, &p, &[u.full()]));
        assert!(sigma_finite_check(&mu, &p, &[SubsetMask(1), SubsetMask(2)]));
        assert!(!sigma_finite_check(&mu, &p, &[SubsetMask(1)]));
        let inf = WeightMeasure::new(u.clone(), vec![XReal::PosInf, 1.into()]).unwrap();
        assert!(!sigma_finite_check(&inf, &p, &[u.full()]));
    }

    #[test]
    fn uniqueness_examples() {
        let u = uni("a,b");
        let g = fam(&u, "{};{a};{a,b}");
        let mu1 = WeightMeasure::new(u.clone(), vec![1.into(), 2.into()]).unwrap();
        let mu2 = mu1.clone();
        let r = uniqueness_check(&mu1, &mu2, &g).unwrap();
        assert!(r.agrees() && r.agree_on_generators && r.dynkin_equals_sigma);
        assert_eq!(r.checked, 4);

        let mu3 = WeightMeasure::new(u.clone(), vec![1.into(), 3.into()]).unwrap();
        let r = uniqueness_check(&mu1, &mu3, &g).unwrap();
        assert!(!r.agree_on_generators);
        assert_eq!(r.disagreement, Some(SubsetMask(3)));

        let not_pi = fam(&u, "{a};{b};{a,b}");
        assert!(matches!(
            uniqueness_check(&mu1, &mu2, &not_pi),
            Err(MeasureError::Domain(_))
        ));
    }

    #[test]
    fn sub_caratheodory_examples() {
        let u = uni("a,b,c");
        let s = fam(&u, "{};{a};{b};{a,b}");
        let mu = WeightMeasure::new(u.clone(), vec![1.into(), 2.into(), 0.into()]).unwrap();
        assert!(sub_caratheodory_check(&s, &mu).unwrap());
        let p = FiniteFamily::powerset(u.clone());
        assert!(sub_caratheodory_check(&p, &mu).unwrap());
    }

    #[test]
    fn fixture_parsing() {
        let u = uni("a,b");
        let w = WeightMeasure::parse(u.clone(), "# weights\na 1\nb 1/2\n").unwrap();
        assert_eq!(w.weights(), &[XReal::one(), ratio(1, 2).into()]);
        let t = SetTable::parse(u.clone(), "{} 0\n{a,b} inf\n").unwrap();
        assert_eq!(t.value(SubsetMask(3)), Some(XReal::PosInf));
        assert!(matches!(
            SetTable::parse(u, "{a} 1\n{c} 2"),
            Err(MeasureError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn resource_limits() {
        let u = FiniteUniverse::numbered(13).unwrap();
        let mu = WeightMeasure::new(u.clone(), vec![XReal::one(); 13]).unwrap();
        let f = FiniteFamily::new(u, [SubsetMask(1)]).unwrap();
        assert!(matches!(outer_extend(&mu, &f), Err(MeasureError::Resource(_))));
    }
}
