//! The forcing relation between patterns, decided on the connect-the-dots
//! map of the forcing pattern.
//!
//! `τ` forces `ν` iff `ν = τ` or `f_τ` has a periodic orbit with pattern `ν`.
//! Every such orbit other than `P` itself is carried by a unique simple loop
//! of the signed Markov graph, so it is enough to solve the simple loops of
//! length `period(ν)` exactly.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::error::Result;
use crate::loops::{lex_pattern, loop_orbit_on, visit_loops, Loop, OrbitOutcome};
use crate::markov::SignedGraph;
use crate::pattern::{sharkovskii_compare, Pattern};
use crate::plmap::PLMap;

/// Non-degenerate pattern carried by a simple loop, with the exact orbit
/// cross-checked against the order of shifts.
fn solve(f: &PLMap, l: &Loop) -> Result<Option<Pattern>> {
    if !l.is_simple() {
        return Ok(None);
    }
    match loop_orbit_on(f, l)? {
        OrbitOutcome::Degenerate(_) => Ok(None),
        OrbitOutcome::Orbit(o) => {
            let lex = lex_pattern(l)?;
            if lex != o.pattern {
                return Err(crate::Error::Invariant(format!(
                    "orbit pattern {} disagrees with shift order {lex} for loop {:?}",
                    o.pattern,
                    l.vertices()
                )));
            }
            Ok(Some(o.pattern))
        }
    }
}

pub fn forces(tau: &Pattern, nu: &Pattern) -> Result<bool> {
    if tau == nu {
        return Ok(true);
    }
    let f = PLMap::new(tau);
    let g = SignedGraph::of(tau);
    let found = visit_loops(&g, nu.period(), |l| {
        // the shift order is combinatorial; only matching loops are solved
        if !l.is_simple() || lex_pattern(l).map_or(true, |p| &p != nu) {
            return ControlFlow::Continue(());
        }
        match solve(&f, l) {
            Ok(Some(p)) if &p == nu => ControlFlow::Break(Ok(())),
            Ok(_) => ControlFlow::Continue(()),
            Err(e) => ControlFlow::Break(Err(e)),
        }
    });
    match found {
        Some(Ok(())) => Ok(true),
        Some(Err(e)) => Err(e),
        None => Ok(false),
    }
}

/// All patterns of period `m` forced by `τ`, sorted by images.
pub fn forced_patterns(tau: &Pattern, m: usize) -> Result<BTreeSet<Pattern>> {
    let mut out = BTreeSet::new();
    if tau.period() == m {
        out.insert(tau.clone());
    }
    let f = PLMap::new(tau);
    let g = SignedGraph::of(tau);
    let err = visit_loops(&g, m, |l| match solve(&f, l) {
        Ok(Some(p)) => {
            out.insert(p);
            ControlFlow::Continue(())
        }
        Ok(None) => ControlFlow::Continue(()),
        Err(e) => ControlFlow::Break(e),
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Whether `f_τ` has a periodic orbit of least period `m`.
pub fn has_period(tau: &Pattern, m: usize) -> Result<bool> {
    if m == tau.period() {
        return Ok(true);
    }
    let f = PLMap::new(tau);
    let g = SignedGraph::of(tau);
    let found = visit_loops(&g, m, |l| match solve(&f, l) {
        Ok(Some(_)) => ControlFlow::Break(Ok(())),
        Ok(None) => ControlFlow::Continue(()),
        Err(e) => ControlFlow::Break(Err(e)),
    });
    match found {
        Some(Ok(())) => Ok(true),
        Some(Err(e)) => Err(e),
        None => Ok(false),
    }
}

/// Periods `m <= max` realized by `f_τ`.
pub fn periods(tau: &Pattern, max: usize) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for m in 1..=max {
        if has_period(tau, m)? {
            out.insert(m);
        }
    }
    Ok(out)
}

/// True iff `set` is closed downwards in the Sharkovskii order within
/// `1..=max`.
pub fn is_sharkovskii_tail(set: &BTreeSet<usize>, max: usize) -> bool {
    set.iter().all(|&p| {
        (1..=max)
            .all(|q| sharkovskii_compare(q as u64, p as u64) != Ordering::Less || set.contains(&q))
    })
}

pub fn check_sharkovskii_tail(tau: &Pattern, max: usize) -> Result<bool> {
    Ok(is_sharkovskii_tail(&periods(tau, max)?, max))
}
