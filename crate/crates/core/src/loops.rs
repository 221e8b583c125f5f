//! Loops of the signed Markov graph: enumeration, shifts, signs, the signed
//! lexicographic order, and the exact periodic orbit carried by a loop.

use std::cmp::Ordering;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::markov::{Sign, SignedGraph};
use crate::pattern::Pattern;
use crate::plmap::{fixed_point, is_integer, least_period, FixedPoints, PLMap, Rational};

/// A closed path `v_0 -> v_1 -> ... -> v_{m-1} -> v_0`; `signs[i]` is the
/// sign of the arrow leaving `v_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Loop {
    vertices: Vec<usize>,
    signs: Vec<Sign>,
}

impl Loop {
    /// Checks every arrow (including the closing one) against `g`.
    pub fn new(g: &SignedGraph, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidArgument("empty loop".into()));
        }
        let m = vertices.len();
        let signs = (0..m)
            .map(|i| {
                let (a, b) = (vertices[i], vertices[(i + 1) % m]);
                g.arrow(a, b).ok_or(Error::BrokenChain { from: a, to: b })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Loop { vertices, signs })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn sign(&self) -> Sign {
        self.signs.iter().fold(Sign::Plus, |acc, &s| acc * s)
    }

    /// Rotation starting at position `i` (mod length).
    pub fn shift(&self, i: usize) -> Loop {
        let m = self.len();
        let r = i % m;
        fn rot<T: Copy>(v: &[T], r: usize) -> Vec<T> {
            v[r..].iter().chain(&v[..r]).copied().collect()
        }
        Loop {
            vertices: rot(&self.vertices, r),
            signs: rot(&self.signs, r),
        }
    }

    /// Not a repetition of a shorter loop.
    pub fn is_simple(&self) -> bool {
        let m = self.len();
        !(1..m).any(|d| {
            m.is_multiple_of(d) && (0..m).all(|i| self.vertices[i] == self.vertices[(i + d) % m])
        })
    }

    fn is_canonical(&self) -> bool {
        let m = self.len();
        (1..m).all(|r| {
            let rotated = self.vertices[r..].iter().chain(&self.vertices[..r]);
            self.vertices.iter().cmp(rotated) != Ordering::Greater
        })
    }

    /// `(v_i, s_i)` along the infinite repetition.
    fn step(&self, i: usize) -> (usize, Sign) {
        let r = i % self.len();
        (self.vertices[r], self.signs[r])
    }
}

/// Compares two finite paths (vertex sequences with the signs of their
/// arrows) in the signed lexicographic order: at the first index `k` where
/// they differ, the smaller vertex wins when the common prefix has sign `+`,
/// the larger when it has sign `-`.
pub fn lex_compare_paths(
    alpha: &[usize],
    alpha_signs: &[Sign],
    beta: &[usize],
) -> Result<Ordering> {
    let mut s = Sign::Plus;
    for k in 0..alpha.len().min(beta.len()) {
        if alpha[k] != beta[k] {
            let ord = alpha[k].cmp(&beta[k]);
            return Ok(if s == Sign::Plus { ord } else { ord.reverse() });
        }
        if k < alpha_signs.len() {
            s = s * alpha_signs[k];
        }
    }
    Err(Error::NoDivergence)
}

/// Compares `α^∞` with `β^∞`; `Equal` iff the infinite paths coincide.
pub fn lex_compare(alpha: &Loop, beta: &Loop) -> Ordering {
    // two periodic words agreeing on |α| + |β| letters are equal
    let horizon = alpha.len() + beta.len();
    let mut s = Sign::Plus;
    for k in 0..horizon {
        let (a, sa) = alpha.step(k);
        let (b, _) = beta.step(k);
        if a != b {
            let ord = a.cmp(&b);
            return if s == Sign::Plus { ord } else { ord.reverse() };
        }
        s = s * sa;
    }
    Ordering::Equal
}

/// Visits every loop of length `m` once per rotation class, represented by
/// its lexicographically least rotation, in lexicographic order.
pub fn visit_loops<B>(
    g: &SignedGraph,
    m: usize,
    mut visit: impl FnMut(&Loop) -> ControlFlow<B>,
) -> Option<B> {
    if m == 0 {
        return None;
    }
    let k = g.vertex_count();
    let succ: Vec<Vec<usize>> = (0..=k)
        .map(|v| if v == 0 { vec![] } else { g.successors(v) })
        .collect();
    let sign: Vec<Sign> = (0..=k)
        .map(|v| g.vertex_sign(v).unwrap_or(Sign::Plus))
        .collect();
    let mut path = Vec::with_capacity(m);
    for start in 1..=k {
        path.clear();
        path.push(start);
        if let ControlFlow::Break(b) = dfs(&succ, &sign, start, m, &mut path, &mut visit) {
            return Some(b);
        }
    }
    None
}

fn dfs<B>(
    succ: &[Vec<usize>],
    sign: &[Sign],
    start: usize,
    m: usize,
    path: &mut Vec<usize>,
    visit: &mut impl FnMut(&Loop) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let last = *path.last().expect("path starts with a vertex");
    if path.len() == m {
        if succ[last].contains(&start) {
            let candidate = Loop {
                vertices: path.clone(),
                signs: path.iter().map(|&v| sign[v]).collect(),
            };
            if candidate.is_canonical() {
                return visit(&candidate);
            }
        }
        return ControlFlow::Continue(());
    }
    // a canonical rotation starts at its least vertex
    for &next in &succ[last] {
        if next < start {
            continue;
        }
        path.push(next);
        let flow = dfs(succ, sign, start, m, path, visit);
        path.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

pub fn enumerate_loops(g: &SignedGraph, m: usize) -> Vec<Loop> {
    let mut out = Vec::new();
    visit_loops::<()>(g, m, |l| {
        out.push(l.clone());
        ControlFlow::Continue(())
    });
    out
}

/// Exact periodic orbit associated to a loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopOrbit {
    pub base: Rational,
    /// `points[i] = f^i(base)`.
    pub points: Vec<Rational>,
    pub least_period: usize,
    pub pattern: Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// `f^m(x) = x` has no solution on the branch domain.
    NoSolution,
    /// The solution is a point of the orbit `P` itself.
    OnPattern,
    /// The solution has a smaller least period than the loop length.
    PeriodCollapse { least_period: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitOutcome {
    Orbit(LoopOrbit),
    Degenerate(Degeneracy),
}

impl OrbitOutcome {
    pub fn orbit(&self) -> Option<&LoopOrbit> {
        match self {
            OrbitOutcome::Orbit(o) => Some(o),
            OrbitOutcome::Degenerate(_) => None,
        }
    }
}

/// Solves for the periodic point associated to `alpha` on `f_τ`.
pub fn loop_orbit(tau: &Pattern, alpha: &Loop) -> Result<OrbitOutcome> {
    let f = PLMap::new(tau);
    loop_orbit_on(&f, alpha)
}

pub(crate) fn loop_orbit_on(f: &PLMap, alpha: &Loop) -> Result<OrbitOutcome> {
    let (branch, domain) = f.compose_along_chain(alpha.vertices())?;
    let base = match fixed_point(&branch, &domain) {
        FixedPoints::None => return Ok(OrbitOutcome::Degenerate(Degeneracy::NoSolution)),
        FixedPoints::UniquePoint(x) => x,
        FixedPoints::WholeInterval => domain.midpoint(),
    };
    if is_integer(&base) {
        return Ok(OrbitOutcome::Degenerate(Degeneracy::OnPattern));
    }
    let m = alpha.len();
    let mut points = Vec::with_capacity(m);
    let mut x = base.clone();
    for &v in alpha.vertices() {
        if !PLMap::basic_interval(v).contains(&x) {
            return Err(Error::Invariant(format!(
                "iterate {x} left basic interval {v} along loop {:?}",
                alpha.vertices()
            )));
        }
        points.push(x.clone());
        x = f.eval(&x)?;
    }
    if x != base {
        return Err(Error::Invariant(format!(
            "loop branch fixed point {base} is not fixed by f^{m}"
        )));
    }
    let d = least_period(&points);
    if d < m {
        return Ok(OrbitOutcome::Degenerate(Degeneracy::PeriodCollapse {
            least_period: d,
        }));
    }
    let pattern = Pattern::from_orbit(&points)?;
    Ok(OrbitOutcome::Orbit(LoopOrbit {
        base,
        points,
        least_period: d,
        pattern,
    }))
}

/// The pattern obtained by ordering the shifts of a simple loop
/// lexicographically.
pub fn lex_pattern(alpha: &Loop) -> Result<Pattern> {
    if !alpha.is_simple() {
        return Err(Error::InvalidArgument("loop is not simple".into()));
    }
    let m = alpha.len();
    let shifts: Vec<Loop> = (0..m).map(|i| alpha.shift(i)).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| lex_compare(&shifts[a], &shifts[b]));
    let mut rank = vec![0usize; m];
    for (pos, &i) in order.iter().enumerate() {
        rank[i] = pos;
    }
    Pattern::from_orbit(&rank)
}

/// Pattern of the orbit of a simple loop, `None` when degenerate. The exact
/// orbit and the lexicographic order of shifts must agree.
pub fn induced_pattern(tau: &Pattern, alpha: &Loop) -> Result<Option<Pattern>> {
    if !alpha.is_simple() {
        return Err(Error::InvalidArgument("loop is not simple".into()));
    }
    match loop_orbit(tau, alpha)? {
        OrbitOutcome::Degenerate(_) => Ok(None),
        OrbitOutcome::Orbit(o) => {
            let lex = lex_pattern(alpha)?;
            if lex != o.pattern {
                return Err(Error::Invariant(format!(
                    "orbit pattern {} disagrees with shift order {} for loop {:?}",
                    o.pattern,
                    lex,
                    alpha.vertices()
                )));
            }
            Ok(Some(o.pattern))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{all_patterns, stefan_pattern};
    use crate::plmap::parse_rational;

    fn pat(v: &[usize]) -> Pattern {
        Pattern::new(v.to_vec()).unwrap()
    }

    fn graph(v: &[usize]) -> SignedGraph {
        SignedGraph::of(&pat(v))
    }

    fn lp(g: &SignedGraph, v: &[usize]) -> Loop {
        Loop::new(g, v.to_vec()).unwrap()
    }

    fn verts(loops: &[Loop]) -> Vec<Vec<usize>> {
        loops.iter().map(|l| l.vertices().to_vec()).collect()
    }

    #[test]
    fn enumerate_examples() {
        let g = graph(&[2, 3, 1]);
        assert_eq!(verts(&enumerate_loops(&g, 1)), vec![vec![2]]);
        let two = enumerate_loops(&g, 2);
        assert_eq!(verts(&two), vec![vec![1, 2], vec![2, 2]]);
        assert!(two[0].is_simple());
        assert!(!two[1].is_simple());
        let h = graph(&[2, 1]);
        let three = enumerate_loops(&h, 3);
        assert_eq!(verts(&three), vec![vec![1, 1, 1]]);
        assert!(!three[0].is_simple());
        assert!(enumerate_loops(&g, 0).is_empty());
        assert!(enumerate_loops(&graph(&[1]), 2).is_empty());
    }

    /// Closed walks from `v` of length `m` equal `(T^m)_vv`; each canonical
    /// loop of length `m` with `r` distinct rotations contributes once per
    /// rotation starting at `v`.
    #[test]
    fn walk_counts_match_matrix_powers() {
        for n in 2..=5 {
            for tau in all_patterns(n) {
                let g = SignedGraph::of(&tau);
                let t = g.transition_matrix();
                for m in 1..=10 {
                    let tm = t.power(m);
                    let mut walks = vec![0u64; g.vertex_count() + 1];
                    for l in enumerate_loops(&g, m) {
                        let mut seen = std::collections::HashSet::new();
                        for i in 0..m {
                            let s = l.shift(i);
                            if seen.insert(s.vertices().to_vec()) {
                                walks[s.vertices()[0]] += 1;
                            }
                        }
                    }
                    for v in 1..=g.vertex_count() {
                        assert_eq!(tm[v - 1][v - 1], walks[v].into(), "{tau} m={m} v={v}");
                    }
                }
            }
        }
    }

    #[test]
    fn simple_examples() {
        let g = graph(&[2, 3, 1]);
        assert!(!lp(&g, &[2, 2]).is_simple());
        assert!(lp(&g, &[1, 2]).is_simple());
        assert!(lp(&g, &[2]).is_simple());
        assert!(lp(&g, &[1, 2, 2]).is_simple());
        assert!(!lp(&g, &[1, 2, 1, 2]).is_simple());
        assert!(Loop::new(&g, vec![1, 1]).is_err());
    }

    #[test]
    fn sign_and_shift_examples() {
        let g = graph(&[2, 3, 1]);
        assert_eq!(lp(&g, &[2]).sign(), Sign::Minus);
        assert_eq!(lp(&g, &[1, 2]).sign(), Sign::Minus);
        assert_eq!(lp(&g, &[2, 2]).sign(), Sign::Plus);
        let a = lp(&g, &[1, 2, 2]);
        assert_eq!(a.shift(3), a);
        assert_eq!(a.shift(1).vertices(), &[2, 2, 1]);
        assert_eq!(a.shift(1).signs(), &[Sign::Minus, Sign::Minus, Sign::Plus]);
        assert_eq!(a.shift(7), a.shift(1));
    }

    #[test]
    fn lex_examples() {
        use Sign::*;
        // prefix sign + : smaller vertex first
        assert_eq!(
            lex_compare_paths(&[1, 1], &[Plus], &[1, 2]),
            Ok(Ordering::Less)
        );
        // prefix sign - : reversed
        assert_eq!(
            lex_compare_paths(&[2, 1], &[Minus], &[2, 2]),
            Ok(Ordering::Greater)
        );
        assert_eq!(
            lex_compare_paths(&[1, 2], &[Plus], &[1, 2]),
            Err(Error::NoDivergence)
        );
        let g = graph(&[2, 3, 1]);
        let a = lp(&g, &[1, 2]);
        assert_eq!(lex_compare(&a, &a), Ordering::Equal);
        assert_eq!(
            lex_compare(&lp(&g, &[2]), &lp(&g, &[2, 2])),
            Ordering::Equal
        );
        // [2]^∞ vs [2,1]^∞ diverge at k = 1 after a '-' arrow
        assert_eq!(lex_compare(&lp(&g, &[2]), &lp(&g, &[2, 1])), Ordering::Less);
    }

    #[test]
    fn shifts_of_simple_loops_are_distinct() {
        for n in 2..=5 {
            for tau in all_patterns(n) {
                let g = SignedGraph::of(&tau);
                for m in 1..=8 {
                    for l in enumerate_loops(&g, m).into_iter().filter(Loop::is_simple) {
                        for i in 0..m {
                            for j in i + 1..m {
                                assert_ne!(l.shift(i), l.shift(j));
                                assert_ne!(lex_compare(&l.shift(i), &l.shift(j)), Ordering::Equal);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn loop_orbit_examples() {
        let tau = pat(&[2, 3, 1]);
        let g = SignedGraph::of(&tau);
        let o = loop_orbit(&tau, &lp(&g, &[2])).unwrap();
        let o = o.orbit().unwrap();
        assert_eq!(o.base, parse_rational("7/3").unwrap());
        assert_eq!(o.least_period, 1);
        assert_eq!(o.pattern, pat(&[1]));

        let o = loop_orbit(&tau, &lp(&g, &[1, 2])).unwrap();
        let o = o.orbit().unwrap();
        assert_eq!(o.base, parse_rational("5/3").unwrap());
        assert_eq!(o.pattern, pat(&[2, 1]));

        let inv = pat(&[2, 1]);
        let h = SignedGraph::of(&inv);
        assert_eq!(
            loop_orbit(&inv, &lp(&h, &[1, 1])).unwrap(),
            OrbitOutcome::Degenerate(Degeneracy::PeriodCollapse { least_period: 1 })
        );
        // the 3-loop of the golden-mean graph carries P itself
        assert_eq!(
            loop_orbit(&tau, &lp(&g, &[1, 2, 2])).unwrap(),
            OrbitOutcome::Degenerate(Degeneracy::OnPattern)
        );
    }

    #[test]
    fn induced_pattern_examples() {
        let tau = stefan_pattern(3).unwrap();
        let g = SignedGraph::of(&tau);
        assert_eq!(
            induced_pattern(&tau, &lp(&g, &[1, 2])).unwrap(),
            Some(pat(&[2, 1]))
        );
        assert_eq!(lex_pattern(&lp(&g, &[1, 2])).unwrap(), pat(&[2, 1]));
        // the only simple 3-loop is associated to P: no second 3-orbit
        let threes: Vec<Loop> = enumerate_loops(&g, 3)
            .into_iter()
            .filter(Loop::is_simple)
            .collect();
        assert_eq!(verts(&threes), vec![vec![1, 2, 2]]);
        assert_eq!(induced_pattern(&tau, &threes[0]).unwrap(), None);
        // a '-' self-loop always yields the fixed point
        for n in 2..=5 {
            for tau in all_patterns(n) {
                let g = SignedGraph::of(&tau);
                for v in 1..n {
                    if g.arrow(v, v) == Some(Sign::Minus) {
                        let l = lp(&g, &[v]);
                        assert_eq!(induced_pattern(&tau, &l).unwrap(), Some(pat(&[1])));
                    }
                }
            }
        }
        assert!(induced_pattern(&tau, &lp(&g, &[2, 2])).is_err());
    }

    #[test]
    fn orbits_respect_membership_and_cross_check() {
        for n in 2..=5 {
            for tau in all_patterns(n) {
                let f = PLMap::new(&tau);
                let g = SignedGraph::of(&tau);
                for m in 1..=6 {
                    for l in enumerate_loops(&g, m) {
                        if let OrbitOutcome::Orbit(o) = loop_orbit(&tau, &l).unwrap() {
                            for (i, x) in o.points.iter().enumerate() {
                                assert!(PLMap::basic_interval(l.vertices()[i]).contains(x));
                            }
                            assert_eq!(f.eval_iter(&o.base, m).unwrap(), o.base);
                            assert!(l.is_simple());
                            assert_eq!(induced_pattern(&tau, &l).unwrap(), Some(o.pattern));
                        }
                    }
                }
            }
        }
    }

    /// Periodic points found by exact root isolation of `f^m(x) - x`
    /// (independent of the loop machinery) each have exactly one
    /// associated loop, and that loop is simple.
    #[test]
    fn unique_loop_per_orbit() {
        for n in 2..=5 {
            for tau in all_patterns(n) {
                let f = PLMap::new(&tau);
                let g = SignedGraph::of(&tau);
                for m in 1..=4 {
                    let (points, intervals) = f.power(m).fixed_points();
                    let mut candidates = points;
                    candidates.extend(intervals.iter().map(|iv| iv.midpoint()));
                    let all_rotations: Vec<Loop> = enumerate_loops(&g, m)
                        .iter()
                        .flat_map(|l| (0..m).map(move |i| l.shift(i)))
                        .collect();
                    for x in candidates {
                        let orbit: Vec<Rational> =
                            (0..m).map(|i| f.eval_iter(&x, i).unwrap()).collect();
                        if least_period(&orbit) != m || is_integer(&x) {
                            continue;
                        }
                        let nu = Pattern::from_orbit(&orbit).unwrap();
                        if nu == tau {
                            continue;
                        }
                        let x0 = orbit.iter().min().unwrap().clone();
                        let mut associated: Vec<&Loop> = all_rotations
                            .iter()
                            .filter(|l| {
                                (0..m).all(|i| {
                                    PLMap::basic_interval(l.vertices()[i])
                                        .contains(&f.eval_iter(&x0, i).unwrap())
                                })
                            })
                            .collect();
                        associated.dedup();
                        assert_eq!(associated.len(), 1, "{tau} m={m} x0={x0}");
                        assert!(associated[0].is_simple());
                    }
                }
            }
        }
    }

    #[test]
    fn loop_json() {
        let g = graph(&[2, 3, 1]);
        let s = serde_json::to_string(&lp(&g, &[1, 2])).unwrap();
        assert_eq!(s, r#"{"vertices":[1,2],"signs":["+","-"]}"#);
    }
}
