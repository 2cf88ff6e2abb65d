//! Finite unions of left-open, right-closed intervals `]a, b]` over the
//! rationals, with rays admitted so the class is closed under complement.
//!
//! Bounded intervals form the semiring of half-open intervals; canonical
//! finite unions of them (plus rays) form the algebra it generates. Every
//! operation here returns canonical sets, so structural equality is set
//! equality.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::xreal::{cmp_q, XReal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("lower bound may not be +inf")]
    LowerPosInf,
    #[error("upper bound may not be -inf")]
    UpperNegInf,
    #[error("empty interval ({lo},{hi}]")]
    Empty { lo: XReal, hi: XReal },
}

/// A nonempty interval `{x | lo < x <= hi}`; `hi = +inf` means unbounded above.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    lo: XReal,
    hi: XReal,
}

fn check_bounds(lo: &XReal, hi: &XReal) -> Result<(), IntervalError> {
    if *lo == XReal::PosInf {
        return Err(IntervalError::LowerPosInf);
    }
    if *hi == XReal::NegInf {
        return Err(IntervalError::UpperNegInf);
    }
    Ok(())
}

impl Interval {
    pub fn new(lo: XReal, hi: XReal) -> Result<Self, IntervalError> {
        check_bounds(&lo, &hi)?;
        if lo >= hi {
            return Err(IntervalError::Empty { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// `]a, b]` with finite bounds. Panics unless `a < b`.
    pub fn bounded(a: BigRational, b: BigRational) -> Self {
        assert!(a < b, "empty interval ({a},{b}]");
        Interval {
            lo: XReal::Fin(a),
            hi: XReal::Fin(b),
        }
    }

    pub fn full() -> Self {
        Interval {
            lo: XReal::NegInf,
            hi: XReal::PosInf,
        }
    }

    pub(crate) fn new_unchecked(lo: XReal, hi: XReal) -> Self {
        debug_assert!(lo < hi && lo != XReal::PosInf && hi != XReal::NegInf);
        Interval { lo, hi }
    }

    pub fn lo(&self) -> &XReal {
        &self.lo
    }

    pub fn hi(&self) -> &XReal {
        &self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn length(&self) -> XReal {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lo < *x && self.hi >= *x
    }

    /// A rational point inside the interval.
    pub fn witness(&self) -> BigRational {
        match (&self.lo, &self.hi) {
            (_, XReal::Fin(b)) => b.clone(),
            (XReal::Fin(a), _) => a + BigRational::one(),
            _ => BigRational::zero(),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}]", self.lo, self.hi)
    }
}

/// A canonical finite union of intervals: sorted, disjoint, non-adjacent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IntervalSet {
    components: Vec<Interval>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Inter,
    Diff,
}

impl SetOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            SetOp::Union => a || b,
            SetOp::Inter => a && b,
            SetOp::Diff => a && !b,
        }
    }
}

/// Walks a canonical component list with monotonically increasing probes.
struct Cursor<'a> {
    comps: &'a [Interval],
    idx: usize,
}

impl<'a> Cursor<'a> {
    fn new(set: &'a IntervalSet) -> Self {
        Cursor {
            comps: &set.components,
            idx: 0,
        }
    }

    fn contains(&mut self, x: &XReal) -> bool {
        while self.idx < self.comps.len() && self.comps[self.idx].hi < *x {
            self.idx += 1;
        }
        self.idx < self.comps.len() && self.comps[self.idx].lo < *x
    }
}

/// The elementary cells `]-inf, p0], ]p0, p1], ..., ]pk, +inf]` cut by
/// sorted, distinct breakpoints.
pub(crate) fn cells_from_points(points: &[BigRational]) -> Vec<Interval> {
    let mut cells = Vec::with_capacity(points.len() + 1);
    let mut lo = XReal::NegInf;
    for p in points {
        let hi = XReal::Fin(p.clone());
        cells.push(Interval::new_unchecked(lo, hi.clone()));
        lo = hi;
    }
    cells.push(Interval::new_unchecked(lo, XReal::PosInf));
    cells
}

/// Rebuilds a canonical set from consecutive cells and their membership flags.
pub(crate) fn set_from_cells<'a, I>(cells: I) -> IntervalSet
where
    I: IntoIterator<Item = (&'a Interval, bool)>,
{
    let mut out: Vec<Interval> = Vec::new();
    let mut open: Option<Interval> = None;
    for (cell, inside) in cells {
        match (&mut open, inside) {
            (Some(run), true) => run.hi = cell.hi.clone(),
            (None, true) => open = Some(cell.clone()),
            (Some(_), false) => out.extend(open.take()),
            (None, false) => {}
        }
    }
    out.extend(open);
    IntervalSet { components: out }
}

fn merge_sorted(a: Vec<BigRational>, b: Vec<BigRational>) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut ia, mut ib) = (a.into_iter().peekable(), b.into_iter().peekable());
    loop {
        let next = match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) if cmp_q(x, y).is_le() => ia.next(),
            (Some(_), Some(_)) => ib.next(),
            (Some(_), None) => ia.next(),
            (None, Some(_)) => ib.next(),
            (None, None) => break,
        };
        if let Some(p) = next {
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
    }
    out
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn full() -> Self {
        IntervalSet {
            components: vec![Interval::full()],
        }
    }

    pub fn from_interval(i: Interval) -> Self {
        IntervalSet { components: vec![i] }
    }

    /// `]a, b]`, or the empty set when `a >= b`.
    pub fn interval(a: BigRational, b: BigRational) -> Self {
        if a < b {
            Self::from_interval(Interval::bounded(a, b))
        } else {
            Self::empty()
        }
    }

    /// Components already sorted, disjoint and non-adjacent.
    pub(crate) fn from_canonical(components: Vec<Interval>) -> Self {
        debug_assert!(components.windows(2).all(|w| w[0].hi < w[1].lo));
        IntervalSet { components }
    }

    /// Canonical union of raw bound pairs. Pairs with `lo >= hi` are empty
    /// and dropped; a `+inf` lower or `-inf` upper bound is rejected.
    pub fn normalize<I>(raw: I) -> Result<Self, IntervalError>
    where
        I: IntoIterator<Item = (XReal, XReal)>,
    {
        let mut items = Vec::new();
        for (lo, hi) in raw {
            check_bounds(&lo, &hi)?;
            if lo < hi {
                items.push(Interval { lo, hi });
            }
        }
        Ok(Self::from_intervals(items))
    }

    /// Canonical union of arbitrary (possibly overlapping) intervals.
    pub fn from_intervals(mut items: Vec<Interval>) -> Self {
        items.sort_unstable_by(|a, b| a.lo.cmp(&b.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(items.len());
        for it in items {
            match out.last_mut() {
                Some(last) if it.lo <= last.hi => {
                    if it.hi > last.hi {
                        last.hi = it.hi;
                    }
                }
                _ => out.push(it),
            }
        }
        IntervalSet { components: out }
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.components.len() == 1 && self.components[0] == Interval::full()
    }

    pub fn is_bounded(&self) -> bool {
        self.components.iter().all(Interval::is_bounded)
    }

    /// Finite endpoints in increasing order.
    pub fn endpoints(&self) -> Vec<BigRational> {
        let mut pts = Vec::with_capacity(2 * self.components.len());
        for c in &self.components {
            pts.extend(c.lo.as_finite().cloned());
            pts.extend(c.hi.as_finite().cloned());
        }
        pts
    }

    pub fn mem(&self, x: &BigRational) -> bool {
        let idx = self.components.partition_point(|c| c.hi < *x);
        idx < self.components.len() && self.components[idx].lo < *x
    }

    /// Exact union, intersection or difference by a single endpoint sweep.
    pub fn set_op(&self, op: SetOp, other: &IntervalSet) -> IntervalSet {
        let points = merge_sorted(self.endpoints(), other.endpoints());
        let cells = cells_from_points(&points);
        let (mut ca, mut cb) = (Cursor::new(self), Cursor::new(other));
        let flags: Vec<bool> = cells
            .iter()
            .map(|c| op.apply(ca.contains(&c.hi), cb.contains(&c.hi)))
            .collect();
        set_from_cells(cells.iter().zip(flags))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        self.set_op(SetOp::Union, other)
    }

    pub fn inter(&self, other: &IntervalSet) -> IntervalSet {
        self.set_op(SetOp::Inter, other)
    }

    pub fn diff(&self, other: &IntervalSet) -> IntervalSet {
        self.set_op(SetOp::Diff, other)
    }

    pub fn complement(&self) -> IntervalSet {
        IntervalSet::full().diff(self)
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.diff(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.inter(other).is_empty()
    }

    /// The decomposition into disjoint semiring pieces (or rays): the
    /// components themselves. The empty set decomposes into nothing.
    pub fn decomp(&self) -> Vec<Interval> {
        self.components.clone()
    }

    /// Smallest single interval containing the set.
    pub fn hull(&self) -> Option<Interval> {
        let first = self.components.first()?;
        let last = self.components.last()?;
        Some(Interval::new_unchecked(first.lo.clone(), last.hi.clone()))
    }

    /// Length of the hull (not of the set itself).
    pub fn hlength(&self) -> XReal {
        self.hull().map_or_else(XReal::zero, |h| h.length())
    }

    /// Sum of component lengths.
    pub fn lebesgue_measure(&self) -> XReal {
        self.components
            .iter()
            .fold(XReal::zero(), |acc, c| acc + c.length())
    }
}

impl From<Interval> for IntervalSet {
    fn from(i: Interval) -> Self {
        IntervalSet::from_interval(i)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("{}");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" U ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Probe points for pointwise comparison of sets and step functions that
/// only change at the given endpoints: each endpoint `e` contributes `e`
/// and `e ± δ`, with `δ` half the smallest gap between distinct endpoints.
pub fn probe_grid(mut endpoints: Vec<BigRational>) -> Vec<BigRational> {
    endpoints.sort_unstable_by(cmp_q);
    endpoints.dedup();
    if endpoints.is_empty() {
        return vec![BigRational::zero()];
    }
    let two = BigRational::from_integer(2.into());
    let delta = endpoints
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .map_or_else(BigRational::one, |gap| gap / &two);
    let mut grid = Vec::with_capacity(3 * endpoints.len());
    for e in &endpoints {
        grid.push(e - &delta);
        grid.push(e.clone());
        grid.push(e + &delta);
    }
    grid
}
