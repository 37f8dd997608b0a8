//! The sequence `N(p,q)` of nonnegative combinations `ap + bq` (with
//! multiplicity), triangle lattice-point counts, and lattice-path partitions.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::current::KnotParams;
use crate::error::{Error, Result};
use crate::numeric::InfRat;

/// `#{(x, y) ∈ Z²≥0 : px + qy ≤ level}`, summed over the coordinate with the
/// larger coefficient.
pub fn lattice_count(kp: &KnotParams, level: i64) -> i128 {
    if level < 0 {
        return 0;
    }
    let (small, large) = if kp.p() <= kp.q() {
        (kp.p(), kp.q())
    } else {
        (kp.q(), kp.p())
    };
    let mut total: i128 = 0;
    let mut rest = level;
    while rest >= 0 {
        total += (rest / small) as i128 + 1;
        rest -= large;
    }
    total
}

/// `N_k(p,q)`: the smallest level whose triangle holds at least `k + 1` points.
pub fn nk(kp: &KnotParams, k: u64) -> i64 {
    let target = k as i128 + 1;
    let (mut lo, mut hi) = (0i64, (k as i64).saturating_mul(kp.p().min(kp.q())));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if lattice_count(kp, mid) >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// `#{j ≤ k : N_j = N_k}`.
pub fn repeat_count(kp: &KnotParams, k: u64) -> u64 {
    let n = nk(kp, k);
    (k as i128 + 1 - lattice_count(kp, n - 1)) as u64
}

/// Number of representations `v = ap + bq` with `a, b ≥ 0`.
fn representations(kp: &KnotParams, v: i64) -> u64 {
    let (p, q) = (kp.p(), kp.q());
    let mut count = 0;
    let mut a = 0;
    while a * p <= v {
        if (v - a * p) % q == 0 {
            count += 1;
        }
        a += 1;
    }
    count
}

/// Lazily materialized prefix `N_0 ≤ N_1 ≤ …` of the sequence.
#[derive(Clone, Debug)]
pub struct NSeq {
    kp: KnotParams,
    values: Vec<i64>,
    repeats: Vec<u64>,
    next_level: i64,
}

impl NSeq {
    pub fn new(kp: KnotParams) -> Self {
        NSeq {
            kp,
            values: Vec::new(),
            repeats: Vec::new(),
            next_level: 0,
        }
    }

    pub fn with_len(kp: KnotParams, len: usize) -> Self {
        let mut s = NSeq::new(kp);
        s.extend_to(len);
        s
    }

    pub fn knot(&self) -> &KnotParams {
        &self.kp
    }

    /// Makes sure at least `len` terms are cached.
    pub fn extend_to(&mut self, len: usize) {
        while self.values.len() < len {
            let v = self.next_level;
            self.next_level += 1;
            for r in 1..=representations(&self.kp, v) {
                self.values.push(v);
                self.repeats.push(r);
            }
        }
    }

    pub fn get(&mut self, k: usize) -> i64 {
        self.extend_to(k + 1);
        self.values[k]
    }

    pub fn repeats(&mut self, k: usize) -> u64 {
        self.extend_to(k + 1);
        self.repeats[k]
    }

    /// Cached terms; may be longer than requested.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn repeat_counts(&self) -> &[u64] {
        &self.repeats
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormPoint {
    pub k: u64,
    pub nk: i64,
    pub repeats: u64,
}

fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// The last index `k` at which `N_k = npq`, where the level line passes
/// through `n + 1` lattice points, together with `N_k` recovered from
/// `(√(8pqk + (p+q+1)²) − (p+q+1)) / 2` and the repeat count `n + 1`.
///
/// Every value is cross-checked against the lattice-count route.
pub fn nk_closed_form(kp: &KnotParams, n: u64) -> Result<ClosedFormPoint> {
    let (p, q) = (kp.p() as i128, kp.q() as i128);
    let n128 = n as i128;
    let points = ((n128 * p + 1) * (n128 * q + 1) - (n128 + 1)) / 2 + n128 + 1;
    let k = points - 1;
    let s = p + q + 1;
    let radicand = 8 * p * q * k + s * s;
    let root = isqrt(radicand);
    if root * root != radicand {
        return Err(Error::Inconsistency(format!(
            "8pqk+(p+q+1)^2 = {radicand} is not a perfect square"
        )));
    }
    let value = (root - s) / 2;
    let point = ClosedFormPoint {
        k: k as u64,
        nk: value as i64,
        repeats: n + 1,
    };

    let level = (n128 * p * q) as i64;
    if value != level as i128
        || lattice_count(kp, level) != points
        || nk(kp, point.k) != level
        || repeat_count(kp, point.k) != point.repeats
        || nk(kp, point.k + 1) == level
    {
        return Err(Error::Inconsistency(format!(
            "closed form disagrees with N({}, {}) at n = {n}",
            kp.p(),
            kp.q()
        )));
    }
    Ok(point)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PathSide {
    /// Highest concave path below the line (positive ends).
    Plus,
    /// Lowest convex path above the line (negative ends).
    Minus,
}

/// A partition of a multiplicity, parts listed left to right along the path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub parts: Vec<u64>,
}

impl Partition {
    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Monotone-chain hull of x-sorted points; `upper` keeps the concave chain.
pub(crate) fn chain_hull(points: &[(i64, i64)], upper: bool) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(points.len());
    for &pt in points {
        while hull.len() >= 2 {
            let c = cross(hull[hull.len() - 2], hull[hull.len() - 1], pt);
            let drop = if upper { c >= 0 } else { c <= 0 };
            if !drop {
                break;
            }
            hull.pop();
        }
        hull.push(pt);
    }
    hull
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Partition `P^±_θ(m)` read off the extremal lattice path from the origin to
/// `(m, ⌊mθ⌋)` (for `+`) or `(m, ⌈mθ⌉)` (for `−`).
pub fn partition(theta: &InfRat, m: u64, side: PathSide) -> Result<Partition> {
    if m == 0 {
        return Err(Error::InvalidArgument("partition of zero".into()));
    }
    let to_i64 = |v: BigInt| {
        v.to_i64()
            .ok_or_else(|| Error::InvalidArgument("angle too large".into()))
    };
    let mut pts = Vec::with_capacity(m as usize + 1);
    for x in 0..=m as i64 {
        let y = theta.scale_i64(x);
        let y = match side {
            PathSide::Plus => y.floor(),
            PathSide::Minus => y.ceil(),
        };
        pts.push((x, to_i64(y)?));
    }
    let hull = chain_hull(&pts, side == PathSide::Plus);
    let mut parts = Vec::new();
    for w in hull.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let g = gcd(dx, dy.abs());
        for _ in 0..g {
            parts.push((dx / g) as u64);
        }
    }
    Ok(Partition { parts })
}
