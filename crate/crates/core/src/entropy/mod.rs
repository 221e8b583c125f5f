//! Entropy of patterns.
//!
//! `h(τ) = max{0, log ρ(T)}` where `T` is the transition matrix of the
//! signed Markov graph. `ρ(T)` is taken as the largest real root of the
//! exact characteristic polynomial; for a nonnegative matrix that root is
//! the Perron root even when `T` is reducible, since the characteristic
//! polynomial factors over the irreducible blocks.

mod poly;

use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

pub use poly::{largest_real_root, IntPolynomial, RootEnclosure};

use crate::error::{Error, Result};
use crate::markov::{Sign, SignedGraph, TransitionMatrix};
use crate::pattern::{sharkovskii_decompose, Pattern};
use crate::plmap::{PLMap, Rational, RationalInterval};

pub const DEFAULT_TOL: f64 = 1e-12;

/// Exact `det(xI - T)` by Faddeev-LeVerrier; every division is exact.
pub fn char_poly(t: &TransitionMatrix) -> IntPolynomial {
    let n = t.size();
    let a: Vec<Vec<BigInt>> = t
        .rows()
        .iter()
        .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
        .collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::from(1);
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(&a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mat_mul(&a, &m);
        let trace: BigInt = (0..n).map(|i| &am[i][i]).sum();
        coeffs[n - k] = -(trace / BigInt::from(k));
    }
    IntPolynomial::new(coeffs)
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    /// Enclosure of `ρ(T)`.
    pub rho: RootEnclosure,
    /// `max{0, log ρ}` at the enclosure midpoint.
    pub h: f64,
    /// `max{0, log}` of the enclosure endpoints.
    pub h_bounds: (f64, f64),
    pub method: &'static str,
}

impl EntropyReport {
    fn from_enclosure(rho: RootEnclosure) -> Self {
        let clamp = |x: f64| if x > 1.0 { x.ln() } else { 0.0 };
        EntropyReport {
            h: clamp(rho.mid_f64()),
            h_bounds: (clamp(rho.lo_f64()), clamp(rho.hi_f64())),
            rho,
            method: "charpoly-bisect",
        }
    }
}

pub fn spectral_radius(t: &TransitionMatrix, tol: f64) -> Result<EntropyReport> {
    poly::rational_tol(tol)?;
    if t.size() == 0 {
        return Ok(EntropyReport::from_enclosure(RootEnclosure::point(
            Rational::zero(),
        )));
    }
    let p = char_poly(t);
    let rho = largest_real_root(&p, tol)?.ok_or_else(|| {
        Error::Invariant(format!("characteristic polynomial {p} has no real root"))
    })?;
    Ok(EntropyReport::from_enclosure(rho))
}

pub fn pattern_entropy(tau: &Pattern, tol: f64) -> Result<EntropyReport> {
    spectral_radius(&SignedGraph::of(tau).transition_matrix(), tol)
}

/// Largest root of `x^q - 2x^(q-2) - 1` for odd `q >= 3`.
pub fn lambda_root(q: usize, tol: f64) -> Result<RootEnclosure> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(Error::NotOddOrTooSmall(q));
    }
    let p = IntPolynomial::lambda_poly(q);
    largest_real_root(&p, tol)?.ok_or_else(|| Error::Invariant(format!("{p} has no real root")))
}

/// `log(λ_q) / 2^n` for `m = 2^n q`, with `λ_1 = 1`.
pub fn entropy_lower_bound(m: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    let key = sharkovskii_decompose(m);
    if key.q == 1 {
        return Ok(0.0);
    }
    let q =
        usize::try_from(key.q).map_err(|_| Error::InvalidArgument("period too large".into()))?;
    let lambda = lambda_root(q, DEFAULT_TOL)?;
    Ok(lambda.mid_f64().ln() / 2f64.powi(key.n as i32))
}

/// Number of maximal monotone pieces of `f_τ^n`.
///
/// Computed by a recursion over the signed Markov graph: on each basic
/// interval the branches of `f^ℓ` are listed left to right with their
/// orientations, tracking only the first and last orientation and the
/// number of orientation changes. A turning point of `f^n` is exactly a
/// change of orientation between adjacent branches.
pub fn lap_count(tau: &Pattern, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("iterate count must be >= 1".into()));
    }
    let g = SignedGraph::of(tau);
    let k = g.vertex_count();
    if k == 0 {
        return Ok(BigUint::from(1u32));
    }
    #[derive(Clone)]
    struct Branches {
        first: Sign,
        last: Sign,
        changes: BigUint,
    }
    let targets: Vec<(usize, usize, Sign)> = (1..=k)
        .map(|v| {
            let s = g.successors(v);
            let sign = g.vertex_sign(v).expect("every vertex covers something");
            (s[0], *s.last().expect("nonempty"), sign)
        })
        .collect();
    let mut level: Vec<Branches> = vec![
        Branches {
            first: Sign::Plus,
            last: Sign::Plus,
            changes: BigUint::zero(),
        };
        k
    ];
    for _ in 0..n {
        let next = targets
            .iter()
            .map(|&(a, b, s)| {
                let mut changes = BigUint::zero();
                for j in a..=b {
                    changes += &level[j - 1].changes;
                    if j < b && level[j - 1].last != level[j].first {
                        changes += 1u32;
                    }
                }
                let (first, last) = match s {
                    Sign::Plus => (level[a - 1].first, level[b - 1].last),
                    Sign::Minus => (
                        Sign::Minus * level[b - 1].last,
                        Sign::Minus * level[a - 1].first,
                    ),
                };
                Branches {
                    first,
                    last,
                    changes,
                }
            })
            .collect();
        level = next;
    }
    let mut laps = BigUint::from(1u32);
    for v in 0..k {
        laps += &level[v].changes;
        if v + 1 < k && level[v].last != level[v + 1].first {
            laps += 1u32;
        }
    }
    Ok(laps)
}

fn as_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `s = (T^n)_vv` closed walks at `vertex`, listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HorseshoeCertificate {
    pub vertex: usize,
    pub n: usize,
    #[serde(serialize_with = "as_decimal")]
    pub s: BigUint,
    /// Each walk lists `v_0 = vertex, ..., v_{n-1}`; the closing arrow
    /// returns to `vertex`.
    pub walks: Vec<Vec<usize>>,
}

/// Largest certificate that will be listed explicitly.
pub const MAX_CERTIFICATE_WALKS: usize = 1 << 20;

pub fn horseshoe_count(g: &SignedGraph, vertex: usize, n: usize) -> Result<HorseshoeCertificate> {
    let k = g.vertex_count();
    if vertex == 0 || vertex > k {
        return Err(Error::BadVertex {
            index: vertex,
            max: k,
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let s = g.transition_matrix().power(n)[vertex - 1][vertex - 1].clone();
    if s > BigUint::from(MAX_CERTIFICATE_WALKS) {
        return Err(Error::InvalidArgument(format!(
            "{s} walks exceed the certificate limit of {MAX_CERTIFICATE_WALKS}"
        )));
    }
    let succ: Vec<Vec<usize>> = (0..=k)
        .map(|v| if v == 0 { vec![] } else { g.successors(v) })
        .collect();
    let mut walks = Vec::new();
    let mut path = vec![vertex];
    let _ = collect_walks(&succ, vertex, n, &mut path, &mut |w| {
        walks.push(w.to_vec());
        ControlFlow::<()>::Continue(())
    });
    if BigUint::from(walks.len()) != s {
        return Err(Error::Invariant(format!(
            "listed {} walks but (T^{n}) diagonal entry is {s}",
            walks.len()
        )));
    }
    Ok(HorseshoeCertificate {
        vertex,
        n,
        s,
        walks,
    })
}

fn collect_walks<B>(
    succ: &[Vec<usize>],
    home: usize,
    n: usize,
    path: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let last = *path.last().expect("nonempty");
    if path.len() == n {
        if succ[last].contains(&home) {
            return visit(path);
        }
        return ControlFlow::Continue(());
    }
    for &next in &succ[last] {
        path.push(next);
        let flow = collect_walks(succ, home, n, path, visit);
        path.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

/// For each certificate walk, the subinterval of the vertex on which
/// `f_τ^n` follows the walk and maps onto the vertex again.
pub fn horseshoe_branches(
    tau: &Pattern,
    cert: &HorseshoeCertificate,
) -> Result<Vec<RationalInterval>> {
    let f = PLMap::new(tau);
    cert.walks
        .iter()
        .map(|w| {
            let mut chain = w.clone();
            chain.push(cert.vertex);
            f.compose_along_chain(&chain).map(|(_, dom)| dom)
        })
        .collect()
}

/// `log ρ` for reporting when only a float is needed.
pub fn entropy_value(tau: &Pattern) -> Result<f64> {
    Ok(pattern_entropy(tau, DEFAULT_TOL)?.h)
}

pub(crate) fn biguint_ln(x: &BigUint) -> f64 {
    match x.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            let bits = x.bits();
            let shift = bits.saturating_sub(64);
            let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
            top.ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// `(1/n) log lap_count(τ, n)`.
pub fn lap_growth(tau: &Pattern, n: usize) -> Result<f64> {
    Ok(biguint_ln(&lap_count(tau, n)?) / n as f64)
}
