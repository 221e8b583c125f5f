//! Cyclic patterns, the Sharkovskii ordering and the canonical
//! minimal-entropy patterns.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cyclic permutation of `{1, ..., n}`, stored 1-indexed:
/// `images[i - 1]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PatternRepr", into = "PatternRepr")]
pub struct Pattern {
    images: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PatternRepr {
    period: usize,
    images: Vec<usize>,
}

impl TryFrom<PatternRepr> for Pattern {
    type Error = Error;

    fn try_from(repr: PatternRepr) -> Result<Self> {
        if repr.period != repr.images.len() {
            return Err(Error::InvalidArgument(format!(
                "period {} does not match {} images",
                repr.period,
                repr.images.len()
            )));
        }
        Pattern::new(repr.images)
    }
}

impl From<Pattern> for PatternRepr {
    fn from(p: Pattern) -> Self {
        PatternRepr {
            period: p.period(),
            images: p.images,
        }
    }
}

impl Pattern {
    /// Validates `images` as a single-cycle permutation of `1..=n`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::NotAPermutation {
                len: 0,
                detail: "empty sequence".into(),
            });
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n {
                return Err(Error::NotAPermutation {
                    len: n,
                    detail: format!("value {v} out of range"),
                });
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::NotAPermutation {
                    len: n,
                    detail: format!("value {v} repeated"),
                });
            }
        }
        let mut cycle_len = 1;
        let mut i = images[0];
        while i != 1 {
            i = images[i - 1];
            cycle_len += 1;
        }
        if cycle_len != n {
            return Err(Error::NotCyclic {
                cycle_len,
                period: n,
            });
        }
        Ok(Pattern { images })
    }

    pub fn period(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of the 1-indexed point `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// The pattern seen through the orientation-reversing relabelling
    /// `i -> n + 1 - i`.
    pub fn mirror(&self) -> Pattern {
        let n = self.period();
        let images = (1..=n).map(|i| n + 1 - self.apply(n + 1 - i)).collect();
        Pattern { images }
    }

    /// Recovers the pattern of a periodic orbit given as points in
    /// dynamical order (`points[k + 1]` is the image of `points[k]`, the
    /// last point maps to the first). Points must be pairwise distinct.
    pub fn from_orbit<T: Ord>(points: &[T]) -> Result<Pattern> {
        let n = points.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| points[a].cmp(&points[b]));
        if order.windows(2).any(|w| points[w[0]] == points[w[1]]) {
            return Err(Error::InvalidArgument(
                "orbit points are not distinct".into(),
            ));
        }
        // rank[k] = spatial position (1-based) of points[k]
        let mut rank = vec![0; n];
        for (pos, &k) in order.iter().enumerate() {
            rank[k] = pos + 1;
        }
        let mut images = vec![0; n];
        for k in 0..n {
            images[rank[k] - 1] = rank[(k + 1) % n];
        }
        Pattern::new(images)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl std::str::FromStr for Pattern {
    type Err = Error;

    /// Parses comma-separated 1-indexed images, e.g. `2,3,1`.
    fn from_str(s: &str) -> Result<Self> {
        let images = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::InvalidArgument(format!("bad image {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(images)
    }
}

/// Every cyclic pattern of period `n`, sorted by images. There are `(n-1)!`.
pub fn all_patterns(n: usize) -> Vec<Pattern> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut rest: Vec<usize> = (2..=n).collect();
    permute(&mut rest, 0, &mut |order| {
        // cycle 1 -> order[0] -> ... -> order[n-2] -> 1
        let mut images = vec![0; n];
        let mut prev = 1;
        for &v in order {
            images[prev - 1] = v;
            prev = v;
        }
        images[prev - 1] = 1;
        out.push(Pattern { images });
    });
    out.sort();
    out
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// A period written as `2^n * q` with `q` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharkovskiiKey {
    pub n: u32,
    pub q: u64,
}

impl SharkovskiiKey {
    pub fn period(&self) -> u64 {
        self.q << self.n
    }
}

/// Splits `m >= 1` into its power of two and odd part.
pub fn sharkovskii_decompose(m: u64) -> SharkovskiiKey {
    assert!(m >= 1, "period must be positive");
    let n = m.trailing_zeros();
    SharkovskiiKey { n, q: m >> n }
}

/// Compares two periods in the Sharkovskii ordering. `Greater` means `p`
/// comes first (3 is the greatest element, 1 the least).
pub fn sharkovskii_compare(p: u64, q: u64) -> Ordering {
    let a = sharkovskii_decompose(p);
    let b = sharkovskii_decompose(q);
    match (a.q == 1, b.q == 1) {
        // pure powers of two: larger power is greater
        (true, true) => a.n.cmp(&b.n),
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        // rows of 2^n * odd: lower rows first, smaller odd part first
        (false, false) => b.n.cmp(&a.n).then(b.q.cmp(&a.q)),
    }
}

/// The Štefan cycle of odd period `q >= 3`.
///
/// Convention: with `c = (q + 1) / 2`, the orbit visits
/// `c, c+1, c-1, c+2, c-2, ..., q, 1` and returns to `c`, so `τ(c) = c + 1`
/// and `τ(1) = c`. For `q = 3` this is `[2, 3, 1]`.
pub fn stefan_pattern(q: usize) -> Result<Pattern> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(Error::NotOddOrTooSmall(q));
    }
    let c = q.div_ceil(2);
    let mut order = vec![c];
    for d in 1..c {
        order.push(c + d);
        order.push(c - d);
    }
    let mut images = vec![0; q];
    for (k, &v) in order.iter().enumerate() {
        images[v - 1] = order[(k + 1) % q];
    }
    Pattern::new(images)
}

/// Period-doubling: the left half `1..=m` is sent increasingly onto the
/// right half `m+1..=2m`, and the right half returns to the left as `τ`.
/// The second iterate restricted to either half has pattern `τ`, which
/// halves the entropy.
pub fn double_pattern(tau: &Pattern) -> Pattern {
    let m = tau.period();
    let mut images = Vec::with_capacity(2 * m);
    images.extend((1..=m).map(|i| m + i));
    images.extend(tau.images().iter().copied());
    Pattern::new(images).expect("doubling of a cyclic pattern is cyclic")
}

/// For `m = 2^n q` with `q` odd: the Štefan `q`-cycle doubled `n` times,
/// or the fixed point doubled `n` times when `q = 1`.
pub fn min_entropy_pattern(m: u64) -> Result<Pattern> {
    if m == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    let key = sharkovskii_decompose(m);
    let mut tau = if key.q == 1 {
        Pattern::new(vec![1])?
    } else {
        let q = usize::try_from(key.q)
            .map_err(|_| Error::InvalidArgument(format!("period {m} too large")))?;
        stefan_pattern(q)?
    };
    for _ in 0..key.n {
        tau = double_pattern(&tau);
    }
    Ok(tau)
}
