//! Uncoupled quasiperiodically forced skew-products
//! `F_τ(θ, x) = (θ + ω mod 1, f_τ(x))` on the cylinder, and periodic orbits
//! of horizontal bands.
//!
//! Only horizontal strips are represented: circles `S¹ × {x}` and bands
//! `S¹ × [a, b]`. For these the strip order reduces to the order of the
//! levels and `F` acts on a level through `f_τ` alone.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::markov::{BasicInterval, Sign, SignedArrow, SignedGraph};
use crate::pattern::Pattern;
use crate::plmap::{
    fmt_rational, least_period, PLMap, PiecewiseLinear, Rational, RationalInterval,
};

/// Binary digits used for the default rotation number.
pub const OMEGA_BITS: u32 = 128;

/// `(√5 - 1) / 2` truncated to [`OMEGA_BITS`] binary digits.
pub fn default_omega() -> Rational {
    let scale = BigInt::one() << (2 * OMEGA_BITS);
    let sqrt5 = (BigInt::from(5) * scale).sqrt();
    let one = BigInt::one() << OMEGA_BITS;
    Rational::new(sqrt5 - one, BigInt::one() << (OMEGA_BITS + 1))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// Decimal expansion truncated to `digits` places.
pub fn fmt_decimal(x: &Rational, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let (whole, rem) = a.numer().div_rem(a.denom());
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let _ = write!(out, "{whole}");
    if digits > 0 {
        out.push('.');
        let mut r = rem;
        for _ in 0..digits {
            r *= 10;
            let (d, rr) = r.div_rem(a.denom());
            let _ = write!(out, "{d}");
            r = rr;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderPoint {
    pub theta: Rational,
    pub x: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncoupledSkewProduct {
    omega: Rational,
    fiber: PLMap,
}

impl UncoupledSkewProduct {
    pub fn new(tau: &Pattern) -> Self {
        UncoupledSkewProduct {
            omega: default_omega(),
            fiber: PLMap::new(tau),
        }
    }

    /// `omega` must lie strictly between 0 and 1.
    pub fn with_omega(tau: &Pattern, omega: Rational) -> Result<Self> {
        if !(omega > Rational::zero() && omega < Rational::one()) {
            return Err(Error::InvalidArgument(format!(
                "rotation number {} not in (0, 1)",
                fmt_rational(&omega)
            )));
        }
        Ok(UncoupledSkewProduct {
            omega,
            fiber: PLMap::new(tau),
        })
    }

    pub fn omega(&self) -> &Rational {
        &self.omega
    }

    pub fn pattern(&self) -> &Pattern {
        self.fiber.pattern()
    }

    /// The fiber map over `θ`; uncoupled, so the same for every `θ`.
    pub fn fiber_at(&self, _theta: &Rational) -> &PLMap {
        &self.fiber
    }

    pub fn rotate(&self, theta: &Rational) -> Rational {
        frac(&(theta + &self.omega))
    }

    pub fn iterate(&self, p: &CylinderPoint, k: usize) -> Result<CylinderPoint> {
        let theta = frac(&(&p.theta + &self.omega * Rational::from_integer(BigInt::from(k))));
        let x = self.fiber.eval_iter(&p.x, k)?;
        Ok(CylinderPoint { theta, x })
    }

    /// Points `F^0(p), ..., F^steps(p)`.
    pub fn trajectory(&self, p: &CylinderPoint, steps: usize) -> Result<Vec<CylinderPoint>> {
        let mut out = Vec::with_capacity(steps + 1);
        let mut cur = CylinderPoint {
            theta: frac(&p.theta),
            x: p.x.clone(),
        };
        if !self.fiber.domain().contains(&cur.x) {
            return Err(Error::OutOfDomain {
                x: fmt_rational(&cur.x),
                n: self.fiber.period(),
            });
        }
        out.push(cur.clone());
        for _ in 0..steps {
            cur = CylinderPoint {
                theta: self.rotate(&cur.theta),
                x: self.fiber.eval(&cur.x)?,
            };
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// CSV rows `k,theta,x` with `θ` in decimal and `x` as `p/q`.
    pub fn trajectory_csv(&self, p: &CylinderPoint, steps: usize) -> Result<String> {
        let mut out = String::from("k,theta,x\n");
        for (k, q) in self.trajectory(p, steps)?.iter().enumerate() {
            let _ = writeln!(
                out,
                "{k},{},{}",
                fmt_decimal(&q.theta, 30),
                fmt_rational(&q.x)
            );
        }
        Ok(out)
    }

    /// The fiber map of `F^k` over `θ`: `f_{R^{k-1}θ} ∘ ... ∘ f_θ`.
    pub fn fiber_composition(&self, theta: &Rational, k: usize) -> PiecewiseLinear {
        let mut g = PiecewiseLinear::identity(&self.fiber.domain());
        let mut t = frac(theta);
        for _ in 0..k {
            g = g.then(self.fiber_at(&t));
            t = self.rotate(&t);
        }
        g
    }

    /// The orbit `S¹ × {1}, ..., S¹ × {n}` of circles.
    pub fn horizontal_orbit(&self) -> Result<HorizontalOrbit> {
        let n = self.fiber.period();
        let bands: Vec<HorizontalBand> = (1..=n)
            .map(|i| HorizontalBand::circle(Rational::from_integer(BigInt::from(i))))
            .collect();
        let images = bands
            .iter()
            .map(|b| {
                let y = self.fiber.eval(&b.lo)?;
                bands
                    .iter()
                    .position(|c| c.lo == y)
                    .map(|j| j + 1)
                    .ok_or_else(|| Error::NotPermuted(format!("level {y} is not a band level")))
            })
            .collect::<Result<Vec<_>>>()?;
        let pattern = Pattern::new(images)?;
        if &pattern != self.pattern() {
            return Err(Error::Invariant(format!(
                "horizontal orbit has pattern {pattern}, expected {}",
                self.pattern()
            )));
        }
        Ok(HorizontalOrbit { bands, pattern })
    }

    /// Recovers the pattern of a periodic orbit of horizontal bands by
    /// locating, exactly, a periodic orbit of `f_τ` that meets each band
    /// once.
    pub fn extract_pattern_from_bands(&self, bands: &[HorizontalBand]) -> Result<Pattern> {
        if bands.is_empty() {
            return Err(Error::NotPermuted("no bands".into()));
        }
        let mut sorted = bands.to_vec();
        sorted.sort_by(|a, b| a.lo.cmp(&b.lo));
        if sorted.windows(2).any(|w| w[0].hi >= w[1].lo) {
            return Err(Error::NotPermuted("bands are not pairwise disjoint".into()));
        }
        let n = sorted.len();
        let window = sorted[0]
            .interval()
            .intersect(&self.fiber.domain())
            .ok_or_else(|| Error::NotPermuted("lowest band misses the fiber domain".into()))?;
        let (mut candidates, intervals) = self.fiber.power_on(&window, n)?.fixed_points();
        candidates.extend(intervals.iter().map(RationalInterval::midpoint));
        let mut found = BTreeSet::new();
        for x in candidates {
            let points: Vec<Rational> = (0..n)
                .map(|i| self.fiber.eval_iter(&x, i))
                .collect::<Result<_>>()?;
            if least_period(&points) != n {
                continue;
            }
            let one_per_band = sorted
                .iter()
                .all(|b| points.iter().filter(|p| b.contains(p)).count() == 1);
            if one_per_band {
                found.insert(Pattern::from_orbit(&points)?);
            }
        }
        let mut it = found.into_iter();
        match (it.next(), it.next()) {
            (Some(p), None) => Ok(p),
            (None, _) => Err(Error::NotPermuted(format!(
                "no periodic orbit of period {n} meets every band once"
            ))),
            (Some(a), Some(b)) => Err(Error::NotPermuted(format!(
                "bands carry orbits with different patterns {a} and {b}"
            ))),
        }
    }

    /// Signed Markov graph on the basic bands between consecutive bands of
    /// `orbit`. A basic band `A` covers `B` positively when
    /// `F(A⁻) ≤ B⁻` and `F(A⁺) ≥ B⁺`, negatively when `F(A⁻) ≥ B⁺` and
    /// `F(A⁺) ≤ B⁻`; `A⁻`, `A⁺` are its lower and upper boundary circles.
    pub fn basic_band_graph(&self, orbit: &HorizontalOrbit) -> Result<SignedGraph> {
        let gaps: Vec<(Rational, Rational)> = orbit
            .bands
            .windows(2)
            .map(|w| (w[0].hi.clone(), w[1].lo.clone()))
            .collect();
        let image = |y: &Rational| self.fiber.eval(y);
        let mut arrows = Vec::new();
        for (i, (a_lo, a_hi)) in gaps.iter().enumerate() {
            let (fa_lo, fa_hi) = (image(a_lo)?, image(a_hi)?);
            for (j, (b_lo, b_hi)) in gaps.iter().enumerate() {
                let sign = if &fa_lo <= b_lo && &fa_hi >= b_hi {
                    Sign::Plus
                } else if &fa_lo >= b_hi && &fa_hi <= b_lo {
                    Sign::Minus
                } else {
                    continue;
                };
                arrows.push(SignedArrow {
                    from: BasicInterval(i + 1),
                    to: BasicInterval(j + 1),
                    sign,
                });
            }
        }
        SignedGraph::from_arrows(gaps.len(), arrows)
    }
}

/// `S¹ × [lo, hi]`; a circle when `lo == hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorizontalBand {
    pub lo: Rational,
    pub hi: Rational,
}

impl HorizontalBand {
    pub fn circle(level: Rational) -> Self {
        HorizontalBand {
            lo: level.clone(),
            hi: level,
        }
    }

    pub fn band(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "band bounds out of order: {} > {}",
                fmt_rational(&lo),
                fmt_rational(&hi)
            )));
        }
        Ok(HorizontalBand { lo, hi })
    }

    pub fn is_circle(&self) -> bool {
        self.lo == self.hi
    }

    pub fn interval(&self) -> RationalInterval {
        RationalInterval {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

impl Serialize for HorizontalBand {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        if self.is_circle() {
            let mut st = s.serialize_struct("HorizontalBand", 2)?;
            st.serialize_field("kind", "circle")?;
            st.serialize_field("level", &fmt_rational(&self.lo))?;
            st.end()
        } else {
            let mut st = s.serialize_struct("HorizontalBand", 3)?;
            st.serialize_field("kind", "band")?;
            st.serialize_field("lo", &fmt_rational(&self.lo))?;
            st.serialize_field("hi", &fmt_rational(&self.hi))?;
            st.end()
        }
    }
}

/// Bands in increasing order of level together with the pattern by which
/// `F` permutes them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HorizontalOrbit {
    pub bands: Vec<HorizontalBand>,
    pub pattern: Pattern,
}
