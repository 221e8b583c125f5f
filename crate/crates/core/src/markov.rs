//! Basic intervals, signed coverings and the signed Markov graph of a
//! pattern.
//!
//! Vertex `k` is the basic interval `[k, k + 1]` between consecutive orbit
//! points; vertices are ordered by position. Arrows only depend on the
//! images of the orbit points, so the graph is a function of the pattern.

use std::fmt::{self, Write as _};
use std::ops::Mul;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::plmap::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The basic interval `[k, k + 1]`, `1 <= k <= n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasicInterval(pub usize);

impl fmt::Display for BasicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.0, self.0 + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedArrow {
    pub from: BasicInterval,
    pub to: BasicInterval,
    pub sign: Sign,
}

/// Sign of the covering `[from, from+1] -> [to, to+1]` under `f_τ`, if any.
pub fn covering_sign(tau: &Pattern, from: usize, to: usize) -> Option<Sign> {
    let a = tau.apply(from);
    let b = tau.apply(from + 1);
    if a <= to && to < b {
        Some(Sign::Plus)
    } else if b <= to && to < a {
        Some(Sign::Minus)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedGraph {
    vertex_count: usize,
    arrows: Vec<SignedArrow>,
}

impl SignedGraph {
    /// The signed Markov graph of `τ`. Fails for period one.
    pub fn build(tau: &Pattern) -> Result<Self> {
        if tau.period() == 1 {
            return Err(Error::PeriodOne);
        }
        Ok(Self::of(tau))
    }

    /// Like [`SignedGraph::build`] but period one yields the empty graph.
    pub fn of(tau: &Pattern) -> Self {
        let k = tau.period().saturating_sub(1);
        let mut arrows = Vec::new();
        for from in 1..=k {
            for to in 1..=k {
                if let Some(sign) = covering_sign(tau, from, to) {
                    arrows.push(SignedArrow {
                        from: BasicInterval(from),
                        to: BasicInterval(to),
                        sign,
                    });
                }
            }
        }
        SignedGraph {
            vertex_count: k,
            arrows,
        }
    }

    /// Builds the graph straight from the covering definition for an
    /// arbitrary orbit: `points` in increasing order and the exact image of
    /// each point.
    pub fn from_orbit(points: &[Rational], images: &[Rational]) -> Result<Self> {
        if points.len() != images.len() {
            return Err(Error::InvalidArgument(
                "points and images differ in length".into(),
            ));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "points must be strictly increasing".into(),
            ));
        }
        let k = points.len().saturating_sub(1);
        let mut arrows = Vec::new();
        for i in 0..k {
            let (f_min, f_max) = (&images[i], &images[i + 1]);
            for j in 0..k {
                let (j_min, j_max) = (&points[j], &points[j + 1]);
                let sign = if f_min <= j_min && j_max <= f_max {
                    Sign::Plus
                } else if f_max <= j_min && j_max <= f_min {
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
        Self::from_arrows(k, arrows)
    }

    /// Assembles a graph from explicit arrows, checking that every arrow
    /// leaving a vertex carries the same sign.
    pub fn from_arrows(vertex_count: usize, mut arrows: Vec<SignedArrow>) -> Result<Self> {
        arrows.sort();
        arrows.dedup();
        for a in &arrows {
            for v in [a.from.0, a.to.0] {
                if v == 0 || v > vertex_count {
                    return Err(Error::BadVertex {
                        index: v,
                        max: vertex_count,
                    });
                }
            }
        }
        for w in arrows.windows(2) {
            if w[0].from == w[1].from && w[0].sign != w[1].sign {
                return Err(Error::Invariant(format!(
                    "vertex {} has arrows of both signs",
                    w[0].from
                )));
            }
            if w[0].from == w[1].from && w[0].to == w[1].to {
                return Err(Error::Invariant(format!(
                    "duplicate arrow {} -> {}",
                    w[0].from, w[0].to
                )));
            }
        }
        Ok(SignedGraph {
            vertex_count,
            arrows,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Arrows sorted by `(from, to)`.
    pub fn arrows(&self) -> &[SignedArrow] {
        &self.arrows
    }

    pub fn arrow(&self, from: usize, to: usize) -> Option<Sign> {
        self.arrows
            .iter()
            .find(|a| a.from.0 == from && a.to.0 == to)
            .map(|a| a.sign)
    }

    /// Targets of vertex `v` in increasing order.
    pub fn successors(&self, v: usize) -> Vec<usize> {
        self.arrows
            .iter()
            .filter(|a| a.from.0 == v)
            .map(|a| a.to.0)
            .collect()
    }

    /// Sign shared by all arrows out of `v`.
    pub fn vertex_sign(&self, v: usize) -> Option<Sign> {
        self.arrows.iter().find(|a| a.from.0 == v).map(|a| a.sign)
    }

    /// Relabels vertex `k` as `vertex_count + 1 - k`.
    pub fn reversed(&self) -> SignedGraph {
        let k = self.vertex_count;
        let arrows = self
            .arrows
            .iter()
            .map(|a| SignedArrow {
                from: BasicInterval(k + 1 - a.from.0),
                to: BasicInterval(k + 1 - a.to.0),
                sign: a.sign,
            })
            .collect();
        SignedGraph::from_arrows(k, arrows).expect("relabelling keeps arrows valid")
    }

    pub fn transition_matrix(&self) -> TransitionMatrix {
        let k = self.vertex_count;
        let mut entries = vec![vec![0u8; k]; k];
        for a in &self.arrows {
            entries[a.from.0 - 1][a.to.0 - 1] = 1;
        }
        TransitionMatrix { entries }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph markov {\n");
        for v in 1..=self.vertex_count {
            let _ = writeln!(out, "  \"{}\";", BasicInterval(v));
        }
        for a in &self.arrows {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                a.from, a.to, a.sign
            );
        }
        out.push_str("}\n");
        out
    }
}

/// 0/1 matrix with `t[i][j] = 1` iff there is an arrow from vertex `i + 1`
/// to vertex `j + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    entries: Vec<Vec<u8>>,
}

impl TransitionMatrix {
    /// Square 0/1 matrix. Rows may be zero here; graphs of patterns never
    /// produce one.
    pub fn new(entries: Vec<Vec<u8>>) -> Result<Self> {
        let k = entries.len();
        if entries.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidArgument("matrix is not square".into()));
        }
        if entries.iter().flatten().any(|&e| e > 1) {
            return Err(Error::InvalidArgument("entries must be 0 or 1".into()));
        }
        Ok(TransitionMatrix { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i][j]
    }

    /// Exact `T^n`.
    pub fn power(&self, n: usize) -> Vec<Vec<BigUint>> {
        let k = self.size();
        let mut acc: Vec<Vec<BigUint>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            BigUint::one()
                        } else {
                            BigUint::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for _ in 0..n {
            let mut next = vec![vec![BigUint::zero(); k]; k];
            for (row, out) in acc.iter().zip(next.iter_mut()) {
                for (a, t) in row.iter().zip(&self.entries) {
                    if a.is_zero() {
                        continue;
                    }
                    for (o, &e) in out.iter_mut().zip(t) {
                        if e == 1 {
                            *o += a;
                        }
                    }
                }
            }
            acc = next;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::all_patterns;
    use crate::plmap::{int, PLMap};

    fn pat(v: &[usize]) -> Pattern {
        Pattern::new(v.to_vec()).unwrap()
    }

    fn arrow(from: usize, to: usize, sign: Sign) -> SignedArrow {
        SignedArrow {
            from: BasicInterval(from),
            to: BasicInterval(to),
            sign,
        }
    }

    /// Brute force from the covering definition: sample the endpoint
    /// images of the exact map.
    fn oracle_arrows(tau: &Pattern) -> Vec<SignedArrow> {
        let f = PLMap::new(tau);
        let k = tau.period() - 1;
        let mut out = Vec::new();
        for i in 1..=k {
            let lo = f.eval(&int(i as i64)).unwrap();
            let hi = f.eval(&int(i as i64 + 1)).unwrap();
            for j in 1..=k {
                let (jl, jh) = (int(j as i64), int(j as i64 + 1));
                if lo <= jl && jh <= hi {
                    out.push(arrow(i, j, Sign::Plus));
                } else if hi <= jl && jh <= lo {
                    out.push(arrow(i, j, Sign::Minus));
                }
            }
        }
        out
    }

    #[test]
    fn graph_examples() {
        let g = SignedGraph::build(&pat(&[2, 3, 1])).unwrap();
        assert_eq!(
            g.arrows(),
            &[
                arrow(1, 2, Sign::Plus),
                arrow(2, 1, Sign::Minus),
                arrow(2, 2, Sign::Minus)
            ]
        );
        let g = SignedGraph::build(&pat(&[2, 1])).unwrap();
        assert_eq!(g.arrows(), &[arrow(1, 1, Sign::Minus)]);
        let g = SignedGraph::build(&pat(&[2, 3, 4, 1])).unwrap();
        assert_eq!(
            g.transition_matrix().rows(),
            &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]
        );
        assert_eq!(g.vertex_sign(3), Some(Sign::Minus));
        assert_eq!(SignedGraph::build(&pat(&[1])), Err(Error::PeriodOne));
        assert_eq!(SignedGraph::of(&pat(&[1])).vertex_count(), 0);
    }

    #[test]
    fn matrix_examples() {
        let t = SignedGraph::of(&pat(&[2, 3, 1])).transition_matrix();
        assert_eq!(t.rows(), &[vec![0, 1], vec![1, 1]]);
        let t = SignedGraph::of(&pat(&[2, 1])).transition_matrix();
        assert_eq!(t.rows(), &[vec![1]]);
        assert!(TransitionMatrix::new(vec![vec![0, 2], vec![1, 1]]).is_err());
        assert!(TransitionMatrix::new(vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn dot_examples() {
        let dot = SignedGraph::of(&pat(&[2, 1])).to_dot();
        assert_eq!(
            dot,
            "digraph markov {\n  \"[1,2]\";\n  \"[1,2]\" -> \"[1,2]\" [label=\"-\"];\n}\n"
        );
        let dot = SignedGraph::of(&pat(&[2, 3, 1])).to_dot();
        assert_eq!(dot.matches("->").count(), 3);
        assert_eq!(dot.matches("label=").count(), 3);
        assert_eq!(
            SignedGraph::of(&pat(&[1])).to_dot(),
            "digraph markov {\n}\n"
        );
    }

    #[test]
    fn json_adjacency() {
        let g = SignedGraph::of(&pat(&[2, 3, 1]));
        let v = serde_json::to_value(g.arrows()).unwrap();
        assert_eq!(v[0], serde_json::json!({"from":1,"to":2,"sign":"+"}));
        assert_eq!(v[1]["sign"], "-");
    }

    #[test]
    fn matches_definition_and_sign_uniqueness() {
        for n in 2..=7 {
            for tau in all_patterns(n) {
                let g = SignedGraph::build(&tau).unwrap();
                assert_eq!(g.arrows(), oracle_arrows(&tau).as_slice(), "{tau}");
                for v in 1..n {
                    assert!(!g.successors(v).is_empty(), "{tau} vertex {v}");
                    let signs: Vec<Sign> = g
                        .arrows()
                        .iter()
                        .filter(|a| a.from.0 == v)
                        .map(|a| a.sign)
                        .collect();
                    assert!(signs.windows(2).all(|w| w[0] == w[1]));
                }
            }
        }
    }

    #[test]
    fn pattern_invariance_under_affine_relabelling() {
        // any exact orbit with pattern τ: p_i = a * i + b with a > 0
        let a = Rational::new(3.into(), 7.into());
        let b = Rational::new((-5).into(), 2.into());
        for n in 2..=6 {
            for tau in all_patterns(n) {
                let pts: Vec<Rational> = (1..=n).map(|i| &a * int(i as i64) + &b).collect();
                let imgs: Vec<Rational> = (1..=n)
                    .map(|i| &a * int(tau.apply(i) as i64) + &b)
                    .collect();
                let g = SignedGraph::from_orbit(&pts, &imgs).unwrap();
                assert_eq!(g, SignedGraph::of(&tau));
            }
        }
    }

    #[test]
    fn pattern_invariance_under_nonuniform_spacing() {
        // strictly increasing but irregular positions
        for tau in all_patterns(5) {
            let pos = |i: usize| int((i * i) as i64) / int(3);
            let pts: Vec<Rational> = (1..=5).map(pos).collect();
            let imgs: Vec<Rational> = (1..=5).map(|i| pos(tau.apply(i))).collect();
            assert_eq!(
                SignedGraph::from_orbit(&pts, &imgs).unwrap(),
                SignedGraph::of(&tau)
            );
        }
    }

    #[test]
    fn mirror_reverses_vertices() {
        for n in 2..=6 {
            for tau in all_patterns(n) {
                let g = SignedGraph::of(&tau);
                assert_eq!(g.reversed(), SignedGraph::of(&tau.mirror()), "{tau}");
            }
        }
    }

    #[test]
    fn from_arrows_rejects_mixed_signs() {
        let bad = vec![arrow(1, 1, Sign::Plus), arrow(1, 2, Sign::Minus)];
        assert!(matches!(
            SignedGraph::from_arrows(2, bad),
            Err(Error::Invariant(_))
        ));
        assert!(SignedGraph::from_arrows(1, vec![arrow(1, 2, Sign::Plus)]).is_err());
    }

    #[test]
    fn matrix_power() {
        let t = SignedGraph::of(&pat(&[2, 3, 1])).transition_matrix();
        let t2 = t.power(2);
        assert_eq!(t2[1][1], BigUint::from(2u32));
        assert_eq!(t2[0][0], BigUint::from(1u32));
        let t0 = t.power(0);
        assert_eq!(t0[0][0], BigUint::one());
        assert!(t0[0][1].is_zero());
    }
}
