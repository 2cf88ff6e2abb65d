//! Extended rationals: finite rationals plus `+inf` and `-inf`.
//!
//! Addition is totalized with `inf + -inf = -inf`, which makes the type a
//! commutative monoid, so finite iterated sums are order independent.
//! Multiplication uses `0 * ±inf = 0`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XRealError {
    #[error("value {0} is outside [-1, 1]")]
    OutOfRange(BigRational),
    #[error("negative term {value} at index {index}")]
    NegativeTerm { index: usize, value: XReal },
    #[error("cannot parse extended rational from {0:?}")]
    Parse(String),
}

/// An extended rational number, ordered `NegInf < Fin(_) < PosInf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum XReal {
    NegInf,
    Fin(BigRational),
    PosInf,
}

/// Rational comparison by cross-multiplication, in machine integers when
/// all parts fit. Much cheaper than `Ratio::cmp` on typical inputs.
pub fn cmp_q(a: &BigRational, b: &BigRational) -> Ordering {
    if a.denom() == b.denom() {
        return a.numer().cmp(b.numer());
    }
    let small = (
        a.numer().to_i64(),
        a.denom().to_i64(),
        b.numer().to_i64(),
        b.denom().to_i64(),
    );
    if let (Some(an), Some(ad), Some(bn), Some(bd)) = small {
        return (an as i128 * bd as i128).cmp(&(bn as i128 * ad as i128));
    }
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

impl Ord for XReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (XReal::Fin(a), XReal::Fin(b)) => cmp_q(a, b),
            (XReal::NegInf, XReal::NegInf) | (XReal::PosInf, XReal::PosInf) => Ordering::Equal,
            (XReal::NegInf, _) | (_, XReal::PosInf) => Ordering::Less,
            (XReal::PosInf, _) | (_, XReal::NegInf) => Ordering::Greater,
        }
    }
}

impl PartialOrd for XReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`. Panics when `den == 0`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl XReal {
    pub fn zero() -> Self {
        XReal::Fin(BigRational::zero())
    }

    pub fn one() -> Self {
        XReal::Fin(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        XReal::Fin(int(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, XReal::Fin(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, XReal::Fin(q) if q.is_zero())
    }

    pub fn is_nonneg(&self) -> bool {
        match self {
            XReal::NegInf => false,
            XReal::Fin(q) => !q.is_negative(),
            XReal::PosInf => true,
        }
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            XReal::Fin(q) => Some(q),
            _ => None,
        }
    }

    pub fn abs(&self) -> XReal {
        match self {
            XReal::Fin(q) => XReal::Fin(q.abs()),
            _ => XReal::PosInf,
        }
    }

    /// Order-preserving bijection onto `[-1, 1]`: `r ↦ r / (1 + |r|)`, `±inf ↦ ±1`.
    pub fn contract(&self) -> BigRational {
        match self {
            XReal::NegInf => -BigRational::one(),
            XReal::PosInf => BigRational::one(),
            XReal::Fin(r) => r / (BigRational::one() + r.abs()),
        }
    }

    /// Inverse of [`XReal::contract`].
    pub fn expand(y: &BigRational) -> Result<XReal, XRealError> {
        let one = BigRational::one();
        if y.abs() > one {
            return Err(XRealError::OutOfRange(y.clone()));
        }
        if *y == one {
            Ok(XReal::PosInf)
        } else if *y == -one.clone() {
            Ok(XReal::NegInf)
        } else {
            Ok(XReal::Fin(y / (one - y.abs())))
        }
    }

    /// Sum of an iterator, starting from the additive identity.
    pub fn sum<'a, I: IntoIterator<Item = &'a XReal>>(items: I) -> XReal {
        items
            .into_iter()
            .fold(XReal::zero(), |acc, x| acc + x.clone())
    }
}

/// Sum of rationals that defers reduction: numerators are accumulated per
/// denominator and only combined once at the end.
#[derive(Debug, Clone, Default)]
pub struct RationalSum {
    buckets: BTreeMap<BigInt, BigInt>,
}

impl RationalSum {
    pub fn new() -> Self {
        RationalSum::default()
    }

    pub fn add(&mut self, q: &BigRational) {
        *self.buckets.entry(q.denom().clone()).or_default() += q.numer();
    }

    /// Adds `a · b` without reducing the product.
    pub fn add_product(&mut self, a: &BigRational, b: &BigRational) {
        *self.buckets.entry(a.denom() * b.denom()).or_default() += a.numer() * b.numer();
    }

    pub fn total(self) -> BigRational {
        self.buckets
            .into_iter()
            .fold(BigRational::zero(), |acc, (d, n)| acc + BigRational::new(n, d))
    }
}

impl From<BigRational> for XReal {
    fn from(q: BigRational) -> Self {
        XReal::Fin(q)
    }
}

impl From<i64> for XReal {
    fn from(n: i64) -> Self {
        XReal::from_int(n)
    }
}

impl PartialEq<BigRational> for XReal {
    fn eq(&self, other: &BigRational) -> bool {
        matches!(self, XReal::Fin(q) if q == other)
    }
}

impl PartialOrd<BigRational> for XReal {
    fn partial_cmp(&self, other: &BigRational) -> Option<Ordering> {
        Some(match self {
            XReal::NegInf => Ordering::Less,
            XReal::PosInf => Ordering::Greater,
            XReal::Fin(q) => cmp_q(q, other),
        })
    }
}

fn add_ref(a: &XReal, b: &XReal) -> XReal {
    match (a, b) {
        (XReal::NegInf, _) | (_, XReal::NegInf) => XReal::NegInf,
        (XReal::PosInf, _) | (_, XReal::PosInf) => XReal::PosInf,
        (XReal::Fin(x), XReal::Fin(y)) => XReal::Fin(x + y),
    }
}

fn mul_ref(a: &XReal, b: &XReal) -> XReal {
    match (a, b) {
        (XReal::Fin(x), XReal::Fin(y)) => XReal::Fin(x * y),
        (XReal::Fin(x), inf) | (inf, XReal::Fin(x)) => {
            if x.is_zero() {
                XReal::zero()
            } else if x.is_positive() {
                inf.clone()
            } else {
                -inf.clone()
            }
        }
        (XReal::PosInf, XReal::PosInf) | (XReal::NegInf, XReal::NegInf) => XReal::PosInf,
        _ => XReal::NegInf,
    }
}

impl Add for XReal {
    type Output = XReal;
    fn add(self, rhs: XReal) -> XReal {
        match (self, rhs) {
            (XReal::Fin(x), XReal::Fin(y)) => XReal::Fin(x + y),
            (a, b) => add_ref(&a, &b),
        }
    }
}

impl<'a> Add<&'a XReal> for &'a XReal {
    type Output = XReal;
    fn add(self, rhs: &XReal) -> XReal {
        add_ref(self, rhs)
    }
}

impl AddAssign for XReal {
    fn add_assign(&mut self, rhs: XReal) {
        match (&mut *self, &rhs) {
            (XReal::Fin(x), XReal::Fin(y)) => *x += y,
            _ => *self = add_ref(self, &rhs),
        }
    }
}

impl Neg for XReal {
    type Output = XReal;
    fn neg(self) -> XReal {
        match self {
            XReal::NegInf => XReal::PosInf,
            XReal::PosInf => XReal::NegInf,
            XReal::Fin(q) => XReal::Fin(-q),
        }
    }
}

impl Neg for &XReal {
    type Output = XReal;
    fn neg(self) -> XReal {
        -self.clone()
    }
}

/// `a - b` is `a + (-b)`, so `inf - inf = -inf`.
impl Sub for XReal {
    type Output = XReal;
    fn sub(self, rhs: XReal) -> XReal {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a XReal> for &'a XReal {
    type Output = XReal;
    fn sub(self, rhs: &XReal) -> XReal {
        add_ref(self, &-rhs)
    }
}

impl Mul for XReal {
    type Output = XReal;
    fn mul(self, rhs: XReal) -> XReal {
        mul_ref(&self, &rhs)
    }
}

impl<'a> Mul<&'a XReal> for &'a XReal {
    type Output = XReal;
    fn mul(self, rhs: &XReal) -> XReal {
        mul_ref(self, rhs)
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XReal::NegInf => f.write_str("-inf"),
            XReal::PosInf => f.write_str("inf"),
            XReal::Fin(q) => write!(f, "{q}"),
        }
    }
}

/// Parses a rational literal `p` or `p/q` (optional leading `-`, no decimals).
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits_ok = |t: &str, signed: bool| {
        let t = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num, true) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = match den {
        Some(d) if digits_ok(d, false) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

impl FromStr for XReal {
    type Err = XRealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" => Ok(XReal::PosInf),
            "-inf" => Ok(XReal::NegInf),
            t => parse_rational(t)
                .map(XReal::Fin)
                .ok_or_else(|| XRealError::Parse(s.to_string())),
        }
    }
}

/// A finitely supported map from ordered keys to extended rationals.
///
/// Keys absent from the map take the default value, and no stored entry ever
/// equals the default, so the stored keys are exactly the support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSupMap<K: Ord> {
    entries: BTreeMap<K, XReal>,
    default: XReal,
}

impl<K: Ord> Default for FinSupMap<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord> FinSupMap<K> {
    /// An empty map with default `0`.
    pub fn new() -> Self {
        Self::with_default(XReal::zero())
    }

    pub fn with_default(default: XReal) -> Self {
        FinSupMap {
            entries: BTreeMap::new(),
            default,
        }
    }

    pub fn default_value(&self) -> &XReal {
        &self.default
    }

    /// Sets `key` to `value`; storing the default removes the entry.
    pub fn insert(&mut self, key: K, value: XReal) {
        if value == self.default {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn get(&self, key: &K) -> &XReal {
        self.entries.get(key).unwrap_or(&self.default)
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &XReal)> {
        self.entries.iter()
    }

    /// Sum over the support entries whose key satisfies `pred`, in ascending
    /// key order. Keys outside the support hold the default and are not
    /// enumerated; with the usual zero default they contribute nothing.
    ///
    /// For a nonnegative family this is also the supremum of all finite
    /// partial sums, which the full support attains.
    pub fn sum_finite_support<P: Fn(&K) -> bool>(&self, pred: P) -> XReal {
        self.entries
            .iter()
            .filter(|(k, _)| pred(k))
            .fold(XReal::zero(), |acc, (_, v)| acc + v.clone())
    }

    pub fn sum(&self) -> XReal {
        self.sum_finite_support(|_| true)
    }
}

impl<K: Ord> FromIterator<(K, XReal)> for FinSupMap<K> {
    fn from_iter<T: IntoIterator<Item = (K, XReal)>>(iter: T) -> Self {
        let mut map = FinSupMap::new();
        for (k, v) in iter {
            map.insert(k, v);
        }
        map
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesLimit {
    pub value: XReal,
    pub converged: bool,
}

/// Limit of the partial sums of a nonnegative series.
///
/// Stops after the first term smaller than `tol` and returns the partial sum
/// including that term. Without convergence after `max_terms` terms the
/// partial sum is returned as a lower bound with `converged == false`.
pub fn series_lim<F>(mut term: F, tol: &BigRational, max_terms: usize) -> Result<SeriesLimit, XRealError>
where
    F: FnMut(usize) -> XReal,
{
    let tol = XReal::Fin(tol.clone());
    let mut partial = XReal::zero();
    for index in 0..max_terms {
        let value = term(index);
        if !value.is_nonneg() {
            return Err(XRealError::NegativeTerm { index, value });
        }
        if value == XReal::PosInf {
            return Ok(SeriesLimit {
                value: XReal::PosInf,
                converged: true,
            });
        }
        let small = value < tol;
        partial += value;
        if small {
            return Ok(SeriesLimit {
                value: partial,
                converged: true,
            });
        }
    }
    Ok(SeriesLimit {
        value: partial,
        converged: false,
    })
}
