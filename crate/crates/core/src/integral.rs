//! Lebesgue integrals of step functions, supremum integrals along monotone
//! approximating sequences, a dominated-convergence harness, and exact
//! product measure / Fubini computations for rectangle step functions.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::intervals::{cells_from_points, Interval, IntervalSet};
pub use crate::simplefn::IntegralError;
use crate::simplefn::{sintegral, Measure, StepFn};
use crate::xreal::{cmp_q, XReal};

/// `∫_D f dμ = ∫ (f·1_D)⁺ dμ − ∫ (f·1_D)⁻ dμ`.
pub fn integrate<M>(mu: &M, domain: &IntervalSet, f: &StepFn) -> Result<XReal, IntegralError>
where
    M: Measure<IntervalSet> + ?Sized,
{
    let g = f.restrict(domain);
    let (pos, neg) = g.pos_neg_parts();
    let ip = sintegral(mu, &pos, true)?;
    let ineg = sintegral(mu, &neg, true)?;
    if ip == XReal::PosInf && ineg == XReal::PosInf {
        return Err(IntegralError::NonIntegrable(
            "positive and negative parts both have infinite integral".into(),
        ));
    }
    Ok(ip - ineg)
}

/// A sequence of step functions given by a pure generator.
pub struct ApproxSeq {
    generator: Box<dyn Fn(usize) -> StepFn + Send + Sync>,
    declared_monotone: bool,
}

impl ApproxSeq {
    pub fn new<F>(generator: F, declared_monotone: bool) -> Self
    where
        F: Fn(usize) -> StepFn + Send + Sync + 'static,
    {
        ApproxSeq {
            generator: Box::new(generator),
            declared_monotone,
        }
    }

    pub fn monotone<F>(generator: F) -> Self
    where
        F: Fn(usize) -> StepFn + Send + Sync + 'static,
    {
        Self::new(generator, true)
    }

    pub fn at(&self, n: usize) -> StepFn {
        (self.generator)(n)
    }

    pub fn declared_monotone(&self) -> bool {
        self.declared_monotone
    }
}

impl fmt::Debug for ApproxSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ApproxSeq")
            .field("declared_monotone", &self.declared_monotone)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupIntegral {
    pub value: XReal,
    pub converged: bool,
    /// `∫_D f_n` for every queried index.
    pub integrals: Vec<XReal>,
}

/// Supremum of `∫_D f_n` along a nonnegative, pointwise nondecreasing
/// sequence, stopping once consecutive integrals differ by less than `tol`.
/// Without convergence after `max_n` indices the last integral is returned
/// as a lower bound.
pub fn nnintegral_sup<M>(
    mu: &M,
    domain: &IntervalSet,
    seq: &ApproxSeq,
    tol: &BigRational,
    max_n: usize,
) -> Result<SupIntegral, IntegralError>
where
    M: Measure<IntervalSet> + ?Sized,
{
    if !seq.declared_monotone() {
        return Err(IntegralError::Domain("sequence is not declared monotone".into()));
    }
    let tol = XReal::Fin(tol.clone());
    let mut integrals: Vec<XReal> = Vec::new();
    let mut prev: Option<StepFn> = None;
    for n in 0..max_n {
        let f = seq.at(n);
        if !f.is_nonneg() {
            return Err(IntegralError::Domain(format!("f_{n} takes a negative value")));
        }
        if let Some(x) = prev.as_ref().and_then(|p| p.exceeds_at(&f)) {
            return Err(IntegralError::Domain(format!(
                "sequence decreases between indices {} and {n} at x = {x}",
                n - 1
            )));
        }
        let value = sintegral(mu, &f.restrict(domain), true)?;
        if let Some(last) = integrals.last() {
            if value < *last {
                return Err(IntegralError::Domain(format!("integral decreases at index {n}")));
            }
        }
        if value == XReal::PosInf {
            integrals.push(value.clone());
            return Ok(SupIntegral { value, converged: true, integrals });
        }
        let step_small = integrals.last().is_some_and(|last| &value - last < tol);
        integrals.push(value.clone());
        if step_small {
            return Ok(SupIntegral { value, converged: true, integrals });
        }
        prev = Some(f);
    }
    Ok(SupIntegral {
        value: integrals.last().cloned().unwrap_or_else(XReal::zero),
        converged: false,
        integrals,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationWitness {
    pub index: usize,
    pub point: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatedReport {
    pub limit_integrable: bool,
    /// `∫_D |f_n − f|` within `tol` at the last queried index.
    pub l1_converged: bool,
    /// `|∫_D f_n − ∫_D f|` within `tol` at the last queried index.
    pub integrals_converged: bool,
    pub converged_at: Option<usize>,
    pub integrals: Vec<XReal>,
    pub l1_errors: Vec<XReal>,
    pub witnesses: Vec<DominationWitness>,
}

impl DominatedReport {
    pub fn passed(&self) -> bool {
        self.limit_integrable && self.l1_converged && self.integrals_converged && self.witnesses.is_empty()
    }
}

/// Numeric check of dominated convergence for a sequence of step functions
/// bounded by an integrable `dominator` on `domain`.
pub fn dominated_check<M, F>(
    mu: &M,
    domain: &IntervalSet,
    seq: F,
    limit: &StepFn,
    dominator: &StepFn,
    tol: &BigRational,
    max_n: usize,
) -> Result<DominatedReport, IntegralError>
where
    M: Measure<IntervalSet> + ?Sized,
    F: Fn(usize) -> StepFn,
{
    if !dominator.is_nonneg() {
        return Err(IntegralError::Domain("dominating function takes a negative value".into()));
    }
    if !integrate(mu, domain, dominator)?.is_finite() {
        return Err(IntegralError::Domain("dominating function is not integrable".into()));
    }
    let tol = XReal::Fin(tol.clone());
    let bound = dominator.restrict(domain);
    let limit_integrable = integrate(mu, domain, &limit.abs())?.is_finite();
    let limit_integral = if limit_integrable {
        integrate(mu, domain, limit)?
    } else {
        XReal::PosInf
    };
    let mut report = DominatedReport {
        limit_integrable,
        l1_converged: false,
        integrals_converged: false,
        converged_at: None,
        integrals: Vec::new(),
        l1_errors: Vec::new(),
        witnesses: Vec::new(),
    };
    for n in 0..max_n {
        let f = seq(n).restrict(domain);
        if let Some(point) = f.abs().exceeds_at(&bound) {
            report.witnesses.push(DominationWitness { index: n, point });
        }
        let err = integrate(mu, domain, &(&f - limit).abs())?;
        let value = integrate(mu, domain, &f)?;
        report.l1_converged = err < tol;
        report.integrals_converged = limit_integrable && (&value - &limit_integral).abs() < tol;
        report.l1_errors.push(err);
        report.integrals.push(value);
        if report.l1_converged && report.integrals_converged {
            report.converged_at = Some(n);
            break;
        }
    }
    Ok(report)
}

/// A step function on the plane: `Σ v · 1_{Sx × Sy}`.
///
/// Canonical form groups the x-axis into maximal sets with identical
/// y-sections, so distinct pieces have disjoint rectangles and equal
/// functions have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StepFn2 {
    pieces: Vec<(BigRational, IntervalSet, IntervalSet)>,
}

fn sorted_endpoints<'a, I: Iterator<Item = &'a IntervalSet>>(sets: I) -> Vec<BigRational> {
    let mut pts: Vec<BigRational> = sets.flat_map(|s| s.endpoints()).collect();
    pts.sort_unstable_by(cmp_q);
    pts.dedup();
    pts
}

impl StepFn2 {
    pub fn zero() -> Self {
        StepFn2::default()
    }

    /// Canonical form of `Σ v · 1_{Sx × Sy}`; overlapping rectangles add up.
    pub fn make<I>(raw: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, IntervalSet, IntervalSet)>,
    {
        let raw: Vec<_> = raw
            .into_iter()
            .filter(|(v, sx, sy)| !v.is_zero() && !sx.is_empty() && !sy.is_empty())
            .collect();
        let xpts = sorted_endpoints(raw.iter().map(|(_, sx, _)| sx));
        let xcells = cells_from_points(&xpts);
        let mut columns: HashMap<StepFn, Vec<Interval>> = HashMap::new();
        let mut order: Vec<StepFn> = Vec::new();
        for cell in &xcells {
            let x = cell.witness();
            let column = StepFn::make(
                raw.iter()
                    .filter(|(_, sx, _)| sx.mem(&x))
                    .map(|(v, _, sy)| (v.clone(), sy.clone())),
            );
            if column.is_zero() {
                continue;
            }
            if !columns.contains_key(&column) {
                order.push(column.clone());
            }
            columns.entry(column).or_default().push(cell.clone());
        }
        let mut pieces = Vec::new();
        for column in order {
            let sx = IntervalSet::from_intervals(columns.remove(&column).unwrap_or_default());
            for (v, sy) in column.pieces() {
                pieces.push((v.clone(), sx.clone(), sy.clone()));
            }
        }
        pieces.sort_unstable_by(|a, b| cmp_q(&a.0, &b.0).then_with(|| (&a.1, &a.2).cmp(&(&b.1, &b.2))));
        StepFn2 { pieces }
    }

    pub fn pieces(&self) -> &[(BigRational, IntervalSet, IntervalSet)] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.pieces
            .iter()
            .filter(|(_, sx, sy)| sx.mem(x) && sy.mem(y))
            .fold(BigRational::zero(), |acc, (v, _, _)| acc + v)
    }

    /// `y ↦ f(x, y)`.
    pub fn xsection(&self, x: &BigRational) -> StepFn {
        StepFn::make(
            self.pieces
                .iter()
                .filter(|(_, sx, _)| sx.mem(x))
                .map(|(v, _, sy)| (v.clone(), sy.clone())),
        )
    }

    /// `(x, y) ↦ f(y, x)`.
    pub fn transpose(&self) -> StepFn2 {
        StepFn2::make(
            self.pieces
                .iter()
                .map(|(v, sx, sy)| (v.clone(), sy.clone(), sx.clone())),
        )
    }

    pub fn abs(&self) -> StepFn2 {
        StepFn2::make(
            self.pieces
                .iter()
                .map(|(v, sx, sy)| (v.abs(), sx.clone(), sy.clone())),
        )
    }

    /// Elementary x-cells on which every y-section is constant.
    fn x_cells(&self) -> Vec<Interval> {
        cells_from_points(&sorted_endpoints(self.pieces.iter().map(|(_, sx, _)| sx)))
    }
}

impl fmt::Display for StepFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("0*1[{} x {}]");
        }
        for (i, (v, sx, sy)) in self.pieces.iter().enumerate() {
            match (i, v.is_negative()) {
                (0, _) => write!(f, "{v}*1[{sx} x {sy}]")?,
                (_, true) => write!(f, " - {}*1[{sx} x {sy}]", v.abs())?,
                (_, false) => write!(f, " + {v}*1[{sx} x {sy}]")?,
            }
        }
        Ok(())
    }
}

/// A finite union of rectangles `Sx × Sy`, kept as a canonical indicator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RectSet {
    indicator: StepFn2,
}

impl RectSet {
    pub fn new<I: IntoIterator<Item = (IntervalSet, IntervalSet)>>(rects: I) -> Self {
        let one = BigRational::from_integer(1.into());
        let covered = StepFn2::make(rects.into_iter().map(|(sx, sy)| (one.clone(), sx, sy)));
        let indicator = StepFn2::make(
            covered
                .pieces
                .into_iter()
                .map(|(_, sx, sy)| (one.clone(), sx, sy)),
        );
        RectSet { indicator }
    }

    /// Disjoint rectangles making up the set.
    pub fn rects(&self) -> impl Iterator<Item = (&IntervalSet, &IntervalSet)> {
        self.indicator.pieces.iter().map(|(_, sx, sy)| (sx, sy))
    }

    pub fn is_empty(&self) -> bool {
        self.indicator.is_zero()
    }

    pub fn contains(&self, x: &BigRational, y: &BigRational) -> bool {
        !self.indicator.eval(x, y).is_zero()
    }

    /// `{y | (x, y) ∈ A}`.
    pub fn xsection(&self, x: &BigRational) -> IntervalSet {
        self.indicator.xsection(x).support()
    }

    pub fn transpose(&self) -> RectSet {
        RectSet {
            indicator: self.indicator.transpose(),
        }
    }

    pub fn indicator(&self) -> &StepFn2 {
        &self.indicator
    }
}

impl fmt::Display for RectSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{} x {}");
        }
        for (i, (sx, sy)) in self.rects().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{sx} x {sy}")?;
        }
        Ok(())
    }
}

/// `(m1 ⊗ m2)(A) = ∫ m2(A_x) dm1(x)`, where `x ↦ m2(A_x)` is a step
/// function of `x` evaluated cell by cell.
pub fn product_measure<M1, M2>(m1: &M1, m2: &M2, set: &RectSet) -> XReal
where
    M1: Measure<IntervalSet> + ?Sized,
    M2: Measure<IntervalSet> + ?Sized,
{
    set.indicator
        .x_cells()
        .into_iter()
        .map(|cell| {
            let section = set.xsection(&cell.witness());
            m2.measure(&section) * m1.measure(&IntervalSet::from(cell))
        })
        .fold(XReal::zero(), |acc, t| acc + t)
}

/// Sums signed terms, refusing to cancel `+∞` against `-∞`.
fn signed_total(terms: impl IntoIterator<Item = XReal>, what: &str) -> Result<XReal, IntegralError> {
    let (mut pos, mut neg) = (XReal::zero(), XReal::zero());
    for t in terms {
        if t.is_nonneg() {
            pos += t;
        } else {
            neg += -t;
        }
    }
    if pos == XReal::PosInf && neg == XReal::PosInf {
        return Err(IntegralError::NonIntegrable(format!(
            "{what}: positive and negative parts both infinite"
        )));
    }
    Ok(pos - neg)
}

fn iterated<M1, M2>(outer: &M1, inner: &M2, f: &StepFn2, order: &str) -> Result<XReal, IntegralError>
where
    M1: Measure<IntervalSet> + ?Sized,
    M2: Measure<IntervalSet> + ?Sized,
{
    let full = IntervalSet::full();
    let mut terms = Vec::new();
    for cell in f.x_cells() {
        let section = f.xsection(&cell.witness());
        let inner_value = integrate(inner, &full, &section)
            .map_err(|e| IntegralError::NonIntegrable(format!("{order}: inner integral: {e}")))?;
        terms.push(inner_value * outer.measure(&IntervalSet::from(cell)));
    }
    signed_total(terms, order)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FubiniReport {
    #[serde(serialize_with = "display")]
    pub lhs: XReal,
    #[serde(serialize_with = "display")]
    pub rhs: XReal,
    #[serde(serialize_with = "display")]
    pub direct: XReal,
    pub equal: bool,
}

fn display<S: serde::Serializer, T: fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Compares `∫dm1 ∫dm2 f`, `∫dm2 ∫dm1 f` and the direct rectangle sum
/// `Σ v · m1(Sx) · m2(Sy)`, all computed exactly.
pub fn fubini_check<M1, M2>(m1: &M1, m2: &M2, f: &StepFn2) -> Result<FubiniReport, IntegralError>
where
    M1: Measure<IntervalSet> + ?Sized,
    M2: Measure<IntervalSet> + ?Sized,
{
    let lhs = iterated(m1, m2, f, "x-then-y order")?;
    let rhs = iterated(m2, m1, &f.transpose(), "y-then-x order")?;
    let direct = signed_total(
        f.pieces
            .iter()
            .map(|(v, sx, sy)| XReal::Fin(v.clone()) * m1.measure(sx) * m2.measure(sy)),
        "rectangle sum",
    )?;
    let equal = lhs == rhs && rhs == direct;
    Ok(FubiniReport { lhs, rhs, direct, equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplefn::{Lebesgue, MeasureSpec, PointMasses};
    use crate::xreal::{int, ratio};

    fn iv(a: i64, b: i64) -> IntervalSet {
        IntervalSet::interval(int(a), int(b))
    }

    fn step(terms: &[(i64, i64, i64)]) -> StepFn {
        StepFn::make(terms.iter().map(|&(v, a, b)| (int(v), iv(a, b))))
    }

    #[test]
    fn restrict_examples() {
        let f = step(&[(3, 0, 2)]);
        assert_eq!(f.restrict(&iv(1, 3)), step(&[(3, 1, 2)]));
        assert_eq!(f.restrict(&IntervalSet::full()), f);
        assert!(f.restrict(&IntervalSet::empty()).is_zero());
    }

    #[test]
    fn integrate_examples() {
        let f = step(&[(3, 0, 1), (-2, 2, 3)]);
        assert_eq!(integrate(&Lebesgue, &iv(0, 10), &f).unwrap(), XReal::one());
        let g = step(&[(3, 0, 1)]);
        let half = IntervalSet::interval(int(0), ratio(1, 2));
        assert_eq!(integrate(&Lebesgue, &half, &g).unwrap(), XReal::Fin(ratio(3, 2)));
        let pos = IntervalSet::normalize([(XReal::from(0), XReal::PosInf)]).unwrap();
        let neg = IntervalSet::normalize([(XReal::NegInf, XReal::from(0))]).unwrap();
        let h = StepFn::make([(int(1), pos), (int(-1), neg)]);
        assert!(matches!(
            integrate(&Lebesgue, &IntervalSet::full(), &h),
            Err(IntegralError::NonIntegrable(_))
        ));
    }

    fn dyadic(n: usize) -> StepFn {
        let den = 1i64 << n;
        StepFn::make((1..den).map(|k| (ratio(k, den), IntervalSet::interval(ratio(k, den), ratio(k + 1, den)))))
    }

    #[test]
    fn monotone_sequences() {
        let tol = ratio(1, 1000);
        let r = nnintegral_sup(&Lebesgue, &IntervalSet::full(), &ApproxSeq::monotone(dyadic), &tol, 30).unwrap();
        assert!(r.converged);
        for (n, v) in r.integrals.iter().enumerate() {
            assert_eq!(*v, XReal::Fin(ratio(1, 2) - ratio(1, 1 << (n + 1))));
        }

        let f = step(&[(2, 0, 1)]);
        let fixed = f.clone();
        let r = nnintegral_sup(&Lebesgue, &IntervalSet::full(), &ApproxSeq::monotone(move |_| fixed.clone()), &tol, 10).unwrap();
        assert_eq!(r.integrals.len(), 2);
        assert_eq!(r.value, XReal::from(2));

        let growing = ApproxSeq::monotone(|n| step(&[(n as i64, 0, 1)]));
        let r = nnintegral_sup(&Lebesgue, &IntervalSet::full(), &growing, &tol, 8).unwrap();
        assert!(!r.converged);
        assert_eq!(r.value, XReal::from(7));

        let shrinking = ApproxSeq::monotone(|n| step(&[(10 - n as i64, 0, 1)]));
        assert!(nnintegral_sup(&Lebesgue, &IntervalSet::full(), &shrinking, &tol, 5).is_err());
        let undeclared = ApproxSeq::new(dyadic, false);
        assert!(nnintegral_sup(&Lebesgue, &IntervalSet::full(), &undeclared, &tol, 5).is_err());
    }

    #[test]
    fn dominated_convergence_harness() {
        let tol = ratio(1, 100);
        let unit = IntervalSet::interval(int(0), int(1));
        let limit = StepFn::indicator(unit.clone());
        let seq = |n: usize| StepFn::constant_on(int(1) - ratio(1, n as i64 + 1), IntervalSet::interval(int(0), int(1)));
        let r = dominated_check(&Lebesgue, &IntervalSet::full(), seq, &limit, &limit, &tol, 200).unwrap();
        assert!(r.passed());
        assert_eq!(r.converged_at, Some(100));
        for (n, v) in r.integrals.iter().enumerate() {
            assert_eq!(*v, XReal::Fin(int(1) - ratio(1, n as i64 + 1)));
        }

        let r = dominated_check(&Lebesgue, &IntervalSet::full(), |_| limit.clone(), &limit, &limit, &tol, 10).unwrap();
        assert_eq!(r.converged_at, Some(0));

        let escape = |n: usize| {
            let k = n as i64 + 1;
            StepFn::constant_on(int(k), IntervalSet::interval(int(0), ratio(1, k)))
        };
        let r = dominated_check(&Lebesgue, &IntervalSet::full(), escape, &StepFn::zero(), &limit, &tol, 5).unwrap();
        assert!(!r.passed());
        assert_eq!(r.witnesses[0], DominationWitness { index: 1, point: ratio(1, 2) });
    }

    #[test]
    fn sections() {
        let f = StepFn2::make([(int(2), iv(0, 1), iv(0, 3))]);
        assert_eq!(f.xsection(&ratio(1, 2)), step(&[(2, 0, 3)]));
        assert!(f.xsection(&int(2)).is_zero());
        let g = StepFn2::make([(int(1), iv(0, 1), iv(0, 1)), (int(3), iv(0, 1), iv(2, 3))]);
        assert_eq!(g.xsection(&ratio(1, 2)), step(&[(1, 0, 1), (3, 2, 3)]));
    }

    #[test]
    fn canonical_plane_form() {
        let a = StepFn2::make([(int(1), iv(0, 2), iv(0, 2))]);
        let b = StepFn2::make([(int(1), iv(0, 1), iv(0, 2)), (int(1), iv(1, 2), iv(0, 1)), (int(1), iv(1, 2), iv(1, 2))]);
        assert_eq!(a, b);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn product_measures() {
        let a = RectSet::new([(iv(0, 1), iv(0, 3))]);
        assert_eq!(product_measure(&Lebesgue, &Lebesgue, &a), XReal::from(3));
        let b = RectSet::new([(iv(0, 1), iv(0, 1)), (iv(2, 3), iv(5, 6))]);
        assert_eq!(product_measure(&Lebesgue, &Lebesgue, &b), XReal::from(2));
        let overlap = RectSet::new([(iv(0, 2), iv(0, 2)), (iv(1, 3), iv(1, 3))]);
        assert_eq!(product_measure(&Lebesgue, &Lebesgue, &overlap), XReal::from(7));
        let pm = MeasureSpec::PointMasses(PointMasses::new(vec![(ratio(1, 2), 5.into())]).unwrap());
        assert_eq!(product_measure(&pm, &Lebesgue, &a), XReal::from(15));
        assert_eq!(product_measure(&Lebesgue, &pm, &a.transpose()), XReal::from(15));
    }

    #[test]
    fn fubini_examples() {
        let f = StepFn2::make([(int(2), iv(0, 1), iv(0, 3))]);
        let r = fubini_check(&Lebesgue, &Lebesgue, &f).unwrap();
        assert_eq!((r.lhs.clone(), r.equal), (XReal::from(6), true));
        let g = StepFn2::make([(int(1), iv(0, 1), iv(0, 1)), (int(-1), iv(1, 2), iv(0, 2))]);
        let r = fubini_check(&Lebesgue, &Lebesgue, &g).unwrap();
        assert_eq!(r.lhs, XReal::from(-1));
        assert_eq!(r.rhs, XReal::from(-1));
        assert_eq!(r.direct, XReal::from(-1));
        assert!(r.equal);
    }

    #[test]
    fn fubini_rejects_mixed_infinities() {
        let pos = IntervalSet::normalize([(XReal::from(0), XReal::PosInf)]).unwrap();
        let neg = IntervalSet::normalize([(XReal::NegInf, XReal::from(0))]).unwrap();
        let f = StepFn2::make([(int(1), iv(0, 1), pos), (int(-1), iv(0, 1), neg)]);
        let err = fubini_check(&Lebesgue, &Lebesgue, &f).unwrap_err();
        assert!(err.to_string().contains("x-then-y"), "{err}");
    }
}
