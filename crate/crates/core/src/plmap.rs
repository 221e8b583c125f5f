//! Exact rational arithmetic and the connect-the-dots map of a pattern.
//!
//! `f_τ` is normalized to the interval `[1, n]` with the orbit at the
//! integers: `f(i) = τ(i)` and `f` is affine on every `[i, i + 1]`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::markov;
use crate::pattern::Pattern;

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Formats as `p/q` (always with an explicit denominator).
pub fn fmt_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q`, an integer, or a plain decimal such as `-0.125`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// A closed interval `[lo, hi]` with rational endpoints (`lo <= hi`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Option<Self> {
        (lo <= hi).then_some(RationalInterval { lo, hi })
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn intersect(&self, other: &RationalInterval) -> Option<RationalInterval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        RationalInterval::new(lo, hi)
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `x -> slope * x + intercept`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub slope: Rational,
    pub intercept: Rational,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            slope: Rational::one(),
            intercept: Rational::zero(),
        }
    }

    /// The affine map through `(x0, y0)` and `(x1, y1)`, `x0 != x1`.
    pub fn through(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational) -> Self {
        let slope = (y1 - y0) / (x1 - x0);
        let intercept = y0 - &slope * x0;
        AffineMap { slope, intercept }
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            slope: &self.slope * &inner.slope,
            intercept: &self.slope * &inner.intercept + &self.intercept,
        }
    }

    /// Preimage of `target`; `None` when the slope is zero.
    pub fn preimage(&self, target: &RationalInterval) -> Option<RationalInterval> {
        if self.slope.is_zero() {
            return None;
        }
        let a = (&target.lo - &self.intercept) / &self.slope;
        let b = (&target.hi - &self.intercept) / &self.slope;
        Some(if a <= b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        })
    }
}

/// Solution set of `a(x) = x` on a domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedPoints {
    UniquePoint(Rational),
    WholeInterval,
    None,
}

pub fn fixed_point(a: &AffineMap, domain: &RationalInterval) -> FixedPoints {
    if a.slope.is_one() {
        return if a.intercept.is_zero() {
            FixedPoints::WholeInterval
        } else {
            FixedPoints::None
        };
    }
    let x = &a.intercept / (Rational::one() - &a.slope);
    if domain.contains(&x) {
        FixedPoints::UniquePoint(x)
    } else {
        FixedPoints::None
    }
}

/// The τ-linear map on `[1, n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLMap {
    pattern: Pattern,
    pieces: Vec<AffineMap>,
}

impl PLMap {
    pub fn new(tau: &Pattern) -> Self {
        let n = tau.period();
        let pieces = (1..n)
            .map(|k| {
                AffineMap::through(
                    &int(k as i64),
                    &int(tau.apply(k) as i64),
                    &int(k as i64 + 1),
                    &int(tau.apply(k + 1) as i64),
                )
            })
            .collect();
        PLMap {
            pattern: tau.clone(),
            pieces,
        }
    }

    pub fn period(&self) -> usize {
        self.pattern.period()
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn domain(&self) -> RationalInterval {
        RationalInterval {
            lo: Rational::one(),
            hi: int(self.period() as i64),
        }
    }

    /// Affine piece on the basic interval `[k, k + 1]`.
    pub fn piece(&self, k: usize) -> &AffineMap {
        &self.pieces[k - 1]
    }

    pub fn pieces(&self) -> &[AffineMap] {
        &self.pieces
    }

    pub fn basic_interval(k: usize) -> RationalInterval {
        RationalInterval {
            lo: int(k as i64),
            hi: int(k as i64 + 1),
        }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let n = self.period();
        if !self.domain().contains(x) {
            return Err(Error::OutOfDomain {
                x: fmt_rational(x),
                n,
            });
        }
        if n == 1 {
            return Ok(Rational::one());
        }
        let k = x.floor().to_integer();
        let k = usize::try_from(k).unwrap_or(1).clamp(1, n - 1);
        Ok(self.pieces[k - 1].apply(x))
    }

    /// `f^k(x)`.
    pub fn eval_iter(&self, x: &Rational, k: usize) -> Result<Rational> {
        let mut y = x.clone();
        for _ in 0..k {
            y = self.eval(&y)?;
        }
        Ok(y)
    }

    /// The affine branch of `f^m` whose `i`-th iterate stays in the basic
    /// interval `chain[i]`, together with its domain.
    pub fn compose_along_chain(&self, chain: &[usize]) -> Result<(AffineMap, RationalInterval)> {
        let vertices = self.period().saturating_sub(1);
        for &k in chain {
            if k == 0 || k > vertices {
                return Err(Error::BadVertex {
                    index: k,
                    max: vertices,
                });
            }
        }
        let Some(&first) = chain.first() else {
            return Err(Error::InvalidArgument("empty chain".into()));
        };
        for w in chain.windows(2) {
            if markov::covering_sign(&self.pattern, w[0], w[1]).is_none() {
                return Err(Error::BrokenChain {
                    from: w[0],
                    to: w[1],
                });
            }
        }
        let mut domain = Self::basic_interval(first);
        let mut branch = AffineMap::identity();
        for &k in chain {
            let pre = branch
                .preimage(&Self::basic_interval(k))
                .expect("pieces have nonzero slope");
            domain = domain.intersect(&pre).ok_or(Error::Invariant(format!(
                "empty branch domain along chain {chain:?}"
            )))?;
            branch = self.pieces[k - 1].after(&branch);
        }
        Ok((branch, domain))
    }

    /// `f^k` on the whole domain as an explicit list of knots.
    pub fn power(&self, k: usize) -> PiecewiseLinear {
        let d = self.domain();
        self.power_on(&d, k)
            .expect("domain of f is inside its own domain")
    }

    /// `f^k` restricted to `window ⊆ [1, n]`.
    pub fn power_on(&self, window: &RationalInterval, k: usize) -> Result<PiecewiseLinear> {
        if !(self.domain().contains(&window.lo) && self.domain().contains(&window.hi)) {
            return Err(Error::OutOfDomain {
                x: window.to_string(),
                n: self.period(),
            });
        }
        let mut g = PiecewiseLinear::identity(window);
        for _ in 0..k {
            g = g.then(self);
        }
        Ok(g)
    }
}

/// A continuous piecewise-affine function given by its knots
/// `(x_0, y_0), ..., (x_r, y_r)` with strictly increasing `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    knots: Vec<(Rational, Rational)>,
}

impl PiecewiseLinear {
    pub fn identity(window: &RationalInterval) -> Self {
        let mut knots = vec![(window.lo.clone(), window.lo.clone())];
        if window.hi != window.lo {
            knots.push((window.hi.clone(), window.hi.clone()));
        }
        PiecewiseLinear { knots }
    }

    pub fn knots(&self) -> &[(Rational, Rational)] {
        &self.knots
    }

    /// `f ∘ self`. Values of `self` must lie in the domain of `f`.
    pub fn then(&self, f: &PLMap) -> PiecewiseLinear {
        let ev = |y: &Rational| f.eval(y).expect("values stay in [1, n]");
        let mut knots = Vec::with_capacity(self.knots.len() * 2);
        for w in self.knots.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            knots.push((x0.clone(), ev(y0)));
            // integers strictly between y0 and y1 are knots of f
            let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
            let first = lo.floor().to_integer() + 1;
            let last = hi.ceil().to_integer() - 1;
            let mut cs: Vec<BigInt> = num_iter_range(&first, &last);
            if y0 > y1 {
                cs.reverse();
            }
            for c in cs {
                let c = Rational::from_integer(c);
                let x = x0 + (&c - y0) * (x1 - x0) / (y1 - y0);
                let fc = ev(&c);
                knots.push((x, fc));
            }
        }
        let (xl, yl) = self.knots.last().expect("at least one knot");
        knots.push((xl.clone(), ev(yl)));
        PiecewiseLinear { knots }
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        if self.knots.len() == 1 {
            return (x == &self.knots[0].0).then(|| self.knots[0].1.clone());
        }
        let i = self.knots.partition_point(|(k, _)| k <= x);
        if i == 0 || (i == self.knots.len() && x > &self.knots[i - 1].0) {
            return None;
        }
        let i = i.min(self.knots.len() - 1);
        let ((x0, y0), (x1, y1)) = (&self.knots[i - 1], &self.knots[i]);
        Some(AffineMap::through(x0, y0, x1, y1).apply(x))
    }

    /// Number of maximal monotone pieces.
    pub fn laps(&self) -> usize {
        let mut laps = 0;
        let mut last = 0i8;
        for w in self.knots.windows(2) {
            let dir = match w[1].1.cmp(&w[0].1) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => -1,
                std::cmp::Ordering::Equal => 0,
            };
            if dir != 0 && dir != last {
                laps += 1;
                last = dir;
            }
        }
        laps.max(1)
    }

    /// Isolated solutions of `g(x) = x` and whole intervals of fixed points.
    pub fn fixed_points(&self) -> (Vec<Rational>, Vec<RationalInterval>) {
        let mut points: Vec<Rational> = Vec::new();
        let mut intervals = Vec::new();
        if self.knots.len() == 1 {
            if self.knots[0].0 == self.knots[0].1 {
                points.push(self.knots[0].0.clone());
            }
            return (points, intervals);
        }
        for w in self.knots.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            let a = AffineMap::through(x0, y0, x1, y1);
            let dom = RationalInterval {
                lo: x0.clone(),
                hi: x1.clone(),
            };
            match fixed_point(&a, &dom) {
                FixedPoints::UniquePoint(x) => {
                    if points.last() != Some(&x) {
                        points.push(x);
                    }
                }
                FixedPoints::WholeInterval => intervals.push(dom),
                FixedPoints::None => {}
            }
        }
        (points, intervals)
    }
}

fn num_iter_range(first: &BigInt, last: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut c = first.clone();
    while &c <= last {
        out.push(c.clone());
        c += 1;
    }
    out
}

/// Least `d` dividing `m` with `points[d] == points[0]` where `points[i]`
/// is the `i`-th iterate.
pub fn least_period(points: &[Rational]) -> usize {
    let m = points.len();
    (1..=m)
        .find(|d| m.is_multiple_of(*d) && (*d == m || points[*d] == points[0]))
        .unwrap_or(m)
}

/// Integer test for exact rationals.
pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}
