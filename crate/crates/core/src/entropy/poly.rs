//! Integer polynomials and certified isolation of the largest real root.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::plmap::Rational;

/// Integer coefficients in ascending degree; the leading coefficient is
/// nonzero (the zero polynomial has no coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x^q - 2 x^(q-2) - 1`.
    pub fn lambda_poly(q: usize) -> Self {
        let mut c = vec![BigInt::zero(); q + 1];
        c[q] = BigInt::one();
        c[q - 2] = BigInt::from(-2);
        c[0] -= 1;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| {
            acc * x + Rational::from_integer(c.clone())
        })
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    fn to_rational(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Rational polynomial used internally for gcd and Sturm chains.
#[derive(Debug, Clone, PartialEq)]
struct QPoly(Vec<Rational>);

impl QPoly {
    fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Quotient and remainder of Euclidean division by nonzero `d`.
    fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let mut r = self.0.clone();
        let dd = d.degree();
        if self.0.len() < d.0.len() {
            return (QPoly(vec![]), self.clone());
        }
        let mut q = vec![Rational::zero(); self.0.len() - d.0.len() + 1];
        for shift in (0..q.len()).rev() {
            let c = &r[shift + dd] / d.lead();
            if !c.is_zero() {
                for (i, dc) in d.0.iter().enumerate() {
                    r[shift + i] -= &c * dc;
                }
            }
            q[shift] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a
    }

    fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }
}

/// Sturm chain of a square-free polynomial.
struct Sturm(Vec<QPoly>);

impl Sturm {
    fn new(p: &QPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().expect("nonempty").is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            chain.push(r.neg());
        }
        chain.pop();
        Sturm(chain)
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.0 {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct real roots in `(a, b]`.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Closed interval `[lo, hi]` known to contain a root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootEnclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootEnclosure {
    pub fn point(x: Rational) -> Self {
        RootEnclosure {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    pub fn mid_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

impl Serialize for RootEnclosure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo_f64(), self.hi_f64()].serialize(s)
    }
}

pub(crate) fn rational_tol(tol: f64) -> Result<Rational> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Rational::from_float(tol).ok_or(Error::InvalidArgument(format!("bad tolerance {tol}")))
}

/// Encloses the largest real root of `p` in an interval of width at most
/// `tol` containing no other root, so that the square-free part of `p`
/// changes sign across it. `None` when `p` has no real root.
pub fn largest_real_root(p: &IntPolynomial, tol: f64) -> Result<Option<RootEnclosure>> {
    let tol = rational_tol(tol)?;
    let q = p.to_rational();
    if q.degree() == 0 || q.is_zero() {
        return Ok(None);
    }
    let sqf = q.div_rem(&q.gcd(&q.derivative())).0;
    let sturm = Sturm::new(&sqf);
    // Cauchy bound: every root satisfies |r| < 1 + max |a_i / a_n|
    let lead = sqf.lead().abs();
    let bound = Rational::one()
        + sqf.0[..sqf.degree()]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
    let mut lo = -bound.clone();
    let mut hi = bound;
    if sturm.count(&lo, &hi) == 0 {
        return Ok(None);
    }
    let two = Rational::from_integer(BigInt::from(2));
    // invariant: the largest root lies in (lo, hi]
    while &hi - &lo > tol || sturm.count(&lo, &hi) > 1 {
        let mid = (&lo + &hi) / &two;
        if sturm.count(&mid, &hi) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (slo, shi) = (sqf.eval(&lo), sqf.eval(&hi));
    if !(shi.is_zero() || (slo.is_positive() != shi.is_positive() && !slo.is_zero())) {
        return Err(Error::Invariant(format!(
            "no sign change across root enclosure of {p}"
        )));
    }
    Ok(Some(RootEnclosure { lo, hi }))
}
