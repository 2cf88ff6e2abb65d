//! Simple functions: step functions on the line and arbitrary functions on
//! a finite universe, together with the simple-function integral.
//!
//! A [`StepFn`] is stored in partition-by-value form: one canonical
//! [`IntervalSet`] per distinct nonzero value. Binary operations refine both
//! operands to the common cells cut by all endpoints, combine values cell by
//! cell, then regroup.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::intervals::{cells_from_points, Interval, IntervalSet};
use crate::measure::WeightMeasure;
use crate::structures::{FiniteUniverse, SubsetMask};
use crate::xreal::{cmp_q, RationalSum, XReal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegralError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not integrable: {0}")]
    NonIntegrable(String),
}

/// A finite linear combination of indicators of interval sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StepFn {
    pieces: Vec<(BigRational, IntervalSet)>,
}

type Segment = (Interval, BigRational);

/// A step function from distinct nonzero levels in any order.
fn sorted(mut pieces: Vec<(BigRational, IntervalSet)>) -> StepFn {
    pieces.sort_unstable_by(|a, b| cmp_q(&a.0, &b.0));
    StepFn { pieces }
}

/// Whether segments, in their given order, are increasing and pairwise disjoint.
fn disjoint(segs: &[Segment]) -> bool {
    segs.windows(2).all(|w| w[0].0.hi() <= w[1].0.lo())
}

/// Common refinement of several segment lists: the elementary cells cut by
/// every finite endpoint, and for each input the summed value on each cell.
fn refine(inputs: &[&[Segment]]) -> (Vec<Interval>, Vec<Vec<BigRational>>) {
    let mut points: Vec<BigRational> = inputs
        .iter()
        .flat_map(|segs| segs.iter())
        .flat_map(|(iv, _)| iv.lo().as_finite().into_iter().chain(iv.hi().as_finite()))
        .cloned()
        .collect();
    points.sort_unstable_by(cmp_q);
    points.dedup();
    let cells = cells_from_points(&points);
    let index_of = |p: &BigRational| points.binary_search_by(|q| cmp_q(q, p)).unwrap_or_else(|i| i);
    let values = inputs
        .iter()
        .map(|segs| {
            let ranges = segs.iter().map(|(iv, v)| {
                let start = iv.lo().as_finite().map_or(0, |p| index_of(p) + 1);
                let end = iv.hi().as_finite().map_or(points.len(), index_of);
                (start, end, v)
            });
            if disjoint(segs) {
                let mut out = vec![BigRational::zero(); cells.len()];
                let mut i = 0;
                let mut seek = |p: Option<&BigRational>, past_end: usize| match p {
                    None => past_end,
                    Some(p) => {
                        while cmp_q(&points[i], p).is_lt() {
                            i += 1;
                        }
                        i
                    }
                };
                for (iv, v) in segs.iter() {
                    let start = seek(iv.lo().as_finite(), usize::MAX).wrapping_add(1);
                    let end = seek(iv.hi().as_finite(), points.len());
                    out[start..=end].fill(v.clone());
                }
                return out;
            }
            let mut diff = vec![BigRational::zero(); cells.len() + 1];
            for (start, end, v) in ranges {
                diff[start] += v;
                diff[end + 1] -= v;
            }
            let mut acc = BigRational::zero();
            diff.truncate(cells.len());
            for d in diff.iter_mut() {
                acc += &*d;
                *d = acc.clone();
            }
            diff
        })
        .collect();
    (cells, values)
}

impl StepFn {
    pub fn zero() -> Self {
        StepFn::default()
    }

    /// `c · 1_A`.
    pub fn constant_on(c: BigRational, set: IntervalSet) -> Self {
        if c.is_zero() || set.is_empty() {
            StepFn::zero()
        } else {
            StepFn {
                pieces: vec![(c, set)],
            }
        }
    }

    pub fn indicator(set: IntervalSet) -> Self {
        Self::constant_on(BigRational::from_integer(1.into()), set)
    }

    /// Canonical form of `x ↦ Σ v` over the raw pairs `(v, S)` with `x ∈ S`;
    /// overlapping supports add up.
    pub fn make<I>(raw: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, IntervalSet)>,
    {
        let segs: Vec<Segment> = raw
            .into_iter()
            .filter(|(v, _)| !v.is_zero())
            .flat_map(|(v, s)| s.components().iter().map(move |c| (c.clone(), v.clone())).collect::<Vec<_>>())
            .collect();
        let (cells, mut values) = refine(&[&segs]);
        Self::from_cells(&cells, values.pop().unwrap_or_default())
    }

    fn from_cells(cells: &[Interval], values: Vec<BigRational>) -> Self {
        let mut groups: HashMap<BigRational, Vec<Interval>> = HashMap::new();
        for (cell, v) in cells.iter().zip(values) {
            if v.is_zero() {
                continue;
            }
            let comps = groups.entry(v).or_default();
            match comps.last_mut() {
                Some(last) if last.hi() == cell.lo() => {
                    *last = Interval::new_unchecked(last.lo().clone(), cell.hi().clone());
                }
                _ => comps.push(cell.clone()),
            }
        }
        sorted(
            groups
                .into_iter()
                .map(|(v, comps)| (v, IntervalSet::from_canonical(comps)))
                .collect(),
        )
    }

    fn segments(&self) -> Vec<Segment> {
        let mut segs: Vec<Segment> = self
            .pieces
            .iter()
            .flat_map(|(v, s)| s.components().iter().map(move |c| (c.clone(), v.clone())))
            .collect();
        segs.sort_unstable_by(|a, b| a.0.lo().cmp(b.0.lo()));
        segs
    }

    /// The `(value, support)` pairs in increasing value order.
    pub fn pieces(&self) -> &[(BigRational, IntervalSet)] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Where the function is nonzero.
    pub fn support(&self) -> IntervalSet {
        IntervalSet::from_intervals(
            self.pieces
                .iter()
                .flat_map(|(_, s)| s.components().iter().cloned())
                .collect(),
        )
    }

    /// Finite endpoints of all supports, sorted and distinct.
    pub fn endpoints(&self) -> Vec<BigRational> {
        let mut pts: Vec<BigRational> = self.pieces.iter().flat_map(|(_, s)| s.endpoints()).collect();
        pts.sort_unstable_by(cmp_q);
        pts.dedup();
        pts
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.pieces
            .iter()
            .find(|(_, s)| s.mem(x))
            .map_or_else(BigRational::zero, |(v, _)| v.clone())
    }

    /// Applies `f` to every value; `f(0)` must be `0`.
    pub fn map_values<F: Fn(&BigRational) -> BigRational>(&self, f: F) -> StepFn {
        let mut groups: HashMap<BigRational, IntervalSet> = HashMap::new();
        for (v, s) in &self.pieces {
            let w = f(v);
            if w.is_zero() {
                continue;
            }
            let merged = match groups.remove(&w) {
                Some(prev) => prev.union(s),
                None => s.clone(),
            };
            groups.insert(w, merged);
        }
        sorted(groups.into_iter().collect())
    }

    /// Pointwise `op(f(x), g(x))`; `op(0, 0)` must be `0`.
    pub fn combine<F>(&self, other: &StepFn, op: F) -> StepFn
    where
        F: Fn(&BigRational, &BigRational) -> BigRational,
    {
        let (a, b) = (self.segments(), other.segments());
        let (cells, values) = refine(&[&a, &b]);
        let combined = values[0].iter().zip(&values[1]).map(|(x, y)| op(x, y)).collect();
        Self::from_cells(&cells, combined)
    }

    pub fn scale(&self, c: &BigRational) -> StepFn {
        if c.is_zero() {
            return StepFn::zero();
        }
        self.map_values(|v| v * c)
    }

    pub fn abs(&self) -> StepFn {
        self.map_values(|v| v.abs())
    }

    pub fn is_nonneg(&self) -> bool {
        self.pieces.iter().all(|(v, _)| v.is_positive())
    }

    /// A point where `self(x) > other(x)`, if any.
    pub fn exceeds_at(&self, other: &StepFn) -> Option<BigRational> {
        let (a, b) = (self.segments(), other.segments());
        let (cells, values) = refine(&[&a, &b]);
        cells
            .iter()
            .zip(values[0].iter().zip(&values[1]))
            .find(|(_, (x, y))| x > y)
            .map(|(cell, _)| cell.witness())
    }

    /// Pointwise `self <= other` everywhere.
    pub fn le(&self, other: &StepFn) -> bool {
        self.exceeds_at(other).is_none()
    }

    /// Level sets of every value including `0`; together they partition the line.
    pub fn range_preimage(&self) -> Vec<(BigRational, IntervalSet)> {
        let mut out = self.pieces.clone();
        let zero_set = self.support().complement();
        if !zero_set.is_empty() {
            out.push((BigRational::zero(), zero_set));
        }
        out
    }

    /// `f = Σ_y y · 1_{f⁻¹(y)}` over the nonzero range; [`StepFn::make`]
    /// applied to the result rebuilds `f`.
    pub fn fimfun_decompose(&self) -> Vec<(BigRational, IntervalSet)> {
        self.pieces.clone()
    }

    /// `(max(f, 0), max(-f, 0))`.
    pub fn pos_neg_parts(&self) -> (StepFn, StepFn) {
        let split = |positive: bool| {
            sorted(
                self.pieces
                    .iter()
                    .filter(|(v, _)| v.is_positive() == positive)
                    .map(|(v, s)| (v.abs(), s.clone()))
                    .collect(),
            )
        };
        (split(true), split(false))
    }

    /// `f · 1_D`.
    pub fn restrict(&self, domain: &IntervalSet) -> StepFn {
        if domain.is_full() {
            return self.clone();
        }
        StepFn {
            pieces: self
                .pieces
                .iter()
                .map(|(v, s)| (v.clone(), s.inter(domain)))
                .filter(|(_, s)| !s.is_empty())
                .collect(),
        }
    }
}

impl Add for &StepFn {
    type Output = StepFn;
    fn add(self, rhs: &StepFn) -> StepFn {
        self.combine(rhs, |x, y| x + y)
    }
}

impl Sub for &StepFn {
    type Output = StepFn;
    fn sub(self, rhs: &StepFn) -> StepFn {
        self.combine(rhs, |x, y| x - y)
    }
}

impl Mul for &StepFn {
    type Output = StepFn;
    fn mul(self, rhs: &StepFn) -> StepFn {
        self.combine(rhs, |x, y| x * y)
    }
}

impl Neg for &StepFn {
    type Output = StepFn;
    fn neg(self) -> StepFn {
        self.map_values(|v| -v)
    }
}

impl fmt::Display for StepFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("0*1[{}]");
        }
        for (i, (v, s)) in self.pieces.iter().enumerate() {
            match (i, v.is_negative()) {
                (0, _) => write!(f, "{v}*1[{s}]")?,
                (_, true) => write!(f, " - {}*1[{s}]", v.abs())?,
                (_, false) => write!(f, " + {v}*1[{s}]")?,
            }
        }
        Ok(())
    }
}

/// A rational-valued function on a finite universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteFn {
    universe: FiniteUniverse,
    values: Vec<BigRational>,
}

impl DiscreteFn {
    pub fn new(universe: FiniteUniverse, values: Vec<BigRational>) -> Result<Self, IntegralError> {
        if values.len() != universe.len() {
            return Err(IntegralError::Domain(format!(
                "{} values for {} atoms",
                values.len(),
                universe.len()
            )));
        }
        Ok(DiscreteFn { universe, values })
    }

    pub fn universe(&self) -> &FiniteUniverse {
        &self.universe
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }
}

/// A function with finitely many nonzero values, each taken on a set `S`.
pub trait SimpleFunction {
    type Set;

    /// Visits each nonzero value with its preimage.
    fn visit_levels(&self, visit: &mut dyn FnMut(&BigRational, &Self::Set));
}

impl SimpleFunction for StepFn {
    type Set = IntervalSet;

    fn visit_levels(&self, visit: &mut dyn FnMut(&BigRational, &IntervalSet)) {
        for (v, s) in &self.pieces {
            visit(v, s);
        }
    }
}

impl SimpleFunction for DiscreteFn {
    type Set = SubsetMask;

    fn visit_levels(&self, visit: &mut dyn FnMut(&BigRational, &SubsetMask)) {
        let mut levels: BTreeMap<&BigRational, SubsetMask> = BTreeMap::new();
        for (i, v) in self.values.iter().enumerate() {
            if !v.is_zero() {
                let m = levels.entry(v).or_default();
                *m = m.union(SubsetMask::singleton(i));
            }
        }
        for (v, m) in levels {
            visit(v, &m);
        }
    }
}

/// A measure evaluated on sets of type `S`.
pub trait Measure<S> {
    fn measure(&self, set: &S) -> XReal;
}

/// Lebesgue measure on interval sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Lebesgue;

impl Measure<IntervalSet> for Lebesgue {
    fn measure(&self, set: &IntervalSet) -> XReal {
        set.lebesgue_measure()
    }
}

/// Finitely many weighted rational points on the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMasses {
    points: Vec<(BigRational, XReal)>,
}

impl PointMasses {
    pub fn new(points: Vec<(BigRational, XReal)>) -> Result<Self, IntegralError> {
        if let Some((p, w)) = points.iter().find(|(_, w)| !w.is_nonneg()) {
            return Err(IntegralError::Domain(format!("negative weight {w} at {p}")));
        }
        Ok(PointMasses { points })
    }

    pub fn points(&self) -> &[(BigRational, XReal)] {
        &self.points
    }
}

impl Measure<IntervalSet> for PointMasses {
    fn measure(&self, set: &IntervalSet) -> XReal {
        self.points
            .iter()
            .filter(|(p, _)| set.mem(p))
            .fold(XReal::zero(), |acc, (_, w)| acc + w.clone())
    }
}

/// A measure on the interval algebra of the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureSpec {
    Lebesgue,
    PointMasses(PointMasses),
}

impl Measure<IntervalSet> for MeasureSpec {
    fn measure(&self, set: &IntervalSet) -> XReal {
        match self {
            MeasureSpec::Lebesgue => Lebesgue.measure(set),
            MeasureSpec::PointMasses(p) => p.measure(set),
        }
    }
}

impl Measure<SubsetMask> for WeightMeasure {
    fn measure(&self, set: &SubsetMask) -> XReal {
        self.eval(*set)
    }
}

/// `Σ_y y · μ(f⁻¹{y})` over the nonzero range, with `0 · ∞ = 0`.
///
/// Mixed `+∞` and `-∞` terms are rejected rather than summed, since the
/// totalized addition would silently yield `-∞`.
pub fn sintegral<F, M>(mu: &M, f: &F, nonneg_required: bool) -> Result<XReal, IntegralError>
where
    F: SimpleFunction + ?Sized,
    M: Measure<F::Set> + ?Sized,
{
    let mut sum = RationalSum::new();
    let (mut pos_inf, mut neg_inf) = (false, false);
    let mut negative = None;
    f.visit_levels(&mut |y, set| {
        if y.is_negative() && negative.is_none() {
            negative = Some(y.clone());
        }
        match mu.measure(set) {
            XReal::Fin(m) => sum.add_product(y, &m),
            inf if !y.is_zero() => {
                if (inf == XReal::PosInf) == y.is_positive() {
                    pos_inf = true;
                } else {
                    neg_inf = true;
                }
            }
            _ => {}
        }
    });
    if let (true, Some(y)) = (nonneg_required, negative) {
        return Err(IntegralError::Domain(format!("negative value {y}")));
    }
    match (pos_inf, neg_inf) {
        (true, true) => Err(IntegralError::NonIntegrable(
            "positive and negative parts both have infinite integral".into(),
        )),
        (true, false) => Ok(XReal::PosInf),
        (false, true) => Ok(XReal::NegInf),
        (false, false) => Ok(XReal::Fin(sum.total())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xreal::{int, ratio};

    fn iv(a: i64, b: i64) -> IntervalSet {
        IntervalSet::interval(int(a), int(b))
    }

    fn step(terms: &[(i64, i64, i64)]) -> StepFn {
        StepFn::make(terms.iter().map(|&(v, a, b)| (int(v), iv(a, b))))
    }

    #[test]
    fn make_adds_overlaps() {
        assert_eq!(step(&[(1, 0, 1), (1, 0, 1)]), step(&[(2, 0, 1)]));
        assert_eq!(step(&[(1, 0, 2), (-1, 1, 2)]), step(&[(1, 0, 1)]));
        assert!(StepFn::make(Vec::new()).is_zero());
    }

    #[test]
    fn make_merges_equal_adjacent_values() {
        let f = step(&[(2, 0, 1), (2, 1, 3), (5, 4, 6)]);
        assert_eq!(f.pieces().len(), 2);
        assert_eq!(f.to_string(), "2*1[(0,3]] + 5*1[(4,6]]");
    }

    #[test]
    fn ring_operations() {
        let f = step(&[(3, 0, 1), (-2, 2, 3)]);
        assert!((&f + &-&f).is_zero());
        let prod = &StepFn::indicator(iv(0, 2)) * &StepFn::indicator(iv(1, 3));
        assert_eq!(prod, StepFn::indicator(iv(1, 2)));
        assert_eq!(StepFn::indicator(iv(0, 1)).scale(&int(3)), step(&[(3, 0, 1)]));
    }

    #[test]
    fn range_preimage_partitions_the_line() {
        let f = step(&[(3, 0, 1)]);
        let r = f.range_preimage();
        assert_eq!(r.len(), 2);
        assert_eq!(r[1].0, int(0));
        assert_eq!(r[1].1.to_string(), "(-inf,0] U (1,inf]");
        assert_eq!(StepFn::zero().range_preimage(), vec![(int(0), IntervalSet::full())]);
    }

    #[test]
    fn decomposition_round_trip() {
        let f = step(&[(2, 0, 1), (5, 3, 4)]);
        assert_eq!(StepFn::make(f.fimfun_decompose()), f);
        assert!(StepFn::zero().fimfun_decompose().is_empty());
    }

    #[test]
    fn sign_parts() {
        let f = step(&[(-2, 0, 1), (3, 2, 3)]);
        let (p, n) = f.pos_neg_parts();
        assert_eq!(p, step(&[(3, 2, 3)]));
        assert_eq!(n, step(&[(2, 0, 1)]));
        let (np, nn) = (-&f).pos_neg_parts();
        assert_eq!((np, nn), (n, p));
    }

    #[test]
    fn sintegral_examples() {
        let f = step(&[(3, 0, 1), (-2, 2, 3)]);
        assert_eq!(sintegral(&Lebesgue, &f, false).unwrap(), XReal::one());
        assert!(matches!(sintegral(&Lebesgue, &f, true), Err(IntegralError::Domain(_))));

        let ray = IntervalSet::normalize([(XReal::from(0), XReal::PosInf)]).unwrap();
        assert_eq!(sintegral(&Lebesgue, &StepFn::indicator(ray), true).unwrap(), XReal::PosInf);

        let u = FiniteUniverse::parse_csv("a,b").unwrap();
        let g = DiscreteFn::new(u.clone(), vec![int(1), int(2)]).unwrap();
        let w = WeightMeasure::new(u, vec![ratio(1, 2).into(), ratio(1, 2).into()]).unwrap();
        assert_eq!(sintegral(&w, &g, true).unwrap(), XReal::Fin(ratio(3, 2)));
    }

    #[test]
    fn sintegral_rejects_mixed_infinities() {
        let pos = IntervalSet::normalize([(XReal::from(0), XReal::PosInf)]).unwrap();
        let neg = IntervalSet::normalize([(XReal::NegInf, XReal::from(0))]).unwrap();
        let f = StepFn::make([(int(1), pos), (int(-1), neg)]);
        assert!(matches!(
            sintegral(&Lebesgue, &f, false),
            Err(IntegralError::NonIntegrable(_))
        ));
    }

    #[test]
    fn point_masses_on_the_line() {
        let pm = PointMasses::new(vec![(int(1), 2.into()), (int(5), 3.into())]).unwrap();
        assert_eq!(pm.measure(&iv(0, 1)), XReal::from(2));
        assert_eq!(pm.measure(&iv(1, 5)), XReal::from(3));
        let f = step(&[(4, 0, 10)]);
        assert_eq!(sintegral(&pm, &f, true).unwrap(), XReal::from(20));
    }

    #[test]
    fn pointwise_order() {
        let f = step(&[(1, 0, 1)]);
        let g = step(&[(2, 0, 2)]);
        assert!(f.le(&g));
        assert!(!g.le(&f));
        assert_eq!(g.exceeds_at(&f), Some(int(1)));
    }
}
