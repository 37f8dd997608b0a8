//! Conley–Zehnder indices, the trivialization ledger and the ECH index.
//!
//! All index arithmetic runs in the orbibundle trivialization, where the
//! relative Chern class vanishes and `I = Q + CZ^I`. The other
//! trivializations only appear through [`cz_in_triv`] and the
//! [`InvariantLedger`].

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::current::{KnotParams, Orbit, ReebCurrent};
use crate::error::{Error, Result};
use crate::numeric::InfRat;

/// Monodromy angle of the embedded orbit in the orbibundle trivialization.
///
/// `b` and `p`, `q` are elliptic with angles `p+q+δ`, `(p+q)/p − δ` and
/// `(p+q)/q − δ`; `h` is positive hyperbolic with angle `2(p+q)`.
pub fn monodromy_angle(orbit: Orbit, kp: &KnotParams) -> InfRat {
    let s = kp.p() + kp.q();
    match orbit {
        Orbit::B => InfRat::frac(s, 1, 1),
        Orbit::H => InfRat::frac(2 * s, 1, 0),
        Orbit::P => InfRat::frac(s, kp.p(), -1),
        Orbit::Q => InfRat::frac(s, kp.q(), -1),
    }
}

/// `CZ_orb(γ^k)`.
pub fn cz_orb(orbit: Orbit, iterate: u32, kp: &KnotParams) -> i64 {
    assert!(iterate >= 1, "iterate must be positive");
    let (k, s) = (iterate as i64, kp.p() + kp.q());
    match orbit {
        Orbit::B => 2 * s * k + 1,
        Orbit::H => 2 * s * k,
        // ⌊(s/n − δ)k⌋ = ⌈sk/n⌉ − 1 for k ≥ 1.
        Orbit::P => 2 * (s * k - 1).div_euclid(kp.p()) + 1,
        Orbit::Q => 2 * (s * k - 1).div_euclid(kp.q()) + 1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trivialization {
    Constant,
    Orbibundle,
    Page,
    SurfaceP,
    SurfaceQ,
    SurfaceH,
}

impl Trivialization {
    pub const ALL: [Trivialization; 6] = [
        Trivialization::Constant,
        Trivialization::Orbibundle,
        Trivialization::Page,
        Trivialization::SurfaceP,
        Trivialization::SurfaceQ,
        Trivialization::SurfaceH,
    ];

    /// Whether the trivialization is defined over `orbit`. Over `p` and `q`
    /// the surface trivializations only exist on `p^p`, `q^q` and their covers.
    pub fn defined_on(self, orbit: Orbit) -> bool {
        use Orbit::*;
        use Trivialization::*;
        match self {
            Orbibundle => true,
            Constant => matches!(orbit, B | H),
            Page => orbit == B,
            SurfaceP => matches!(orbit, B | P),
            SurfaceQ => matches!(orbit, B | Q),
            SurfaceH => matches!(orbit, B | H),
        }
    }
}

impl fmt::Display for Trivialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trivialization::Constant => "constant",
            Trivialization::Orbibundle => "orbibundle",
            Trivialization::Page => "page",
            Trivialization::SurfaceP => "surface_p",
            Trivialization::SurfaceQ => "surface_q",
            Trivialization::SurfaceH => "surface_h",
        })
    }
}

impl FromStr for Trivialization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Trivialization::ALL
            .into_iter()
            .find(|t| t.to_string() == s || (s == "orb" && *t == Trivialization::Orbibundle))
            .ok_or_else(|| Error::Parse {
                what: "trivialization",
                input: s.into(),
            })
    }
}

/// Relative homology classes entering the Chern and intersection numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SurfaceClass {
    /// The page `[Σ]`.
    Page,
    /// `Z_b`, `Z_h`, `Z_p`, `Z_q`: the classes per unit multiplicity.
    Z(Orbit),
    /// `Z_{p^p}`, `Z_{q^q}`: classes bounded by the full-turn covers.
    Cover(Orbit),
}

/// Relative Chern numbers, relative intersection pairings and trivialization
/// offsets for one knot type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantLedger {
    kp: KnotParams,
}

impl InvariantLedger {
    pub fn new(kp: KnotParams) -> Self {
        InvariantLedger { kp }
    }

    pub fn knot(&self) -> &KnotParams {
        &self.kp
    }

    /// Self-linking number `pq − p − q` of the torus knot.
    pub fn self_linking(&self) -> i64 {
        self.kp.self_linking()
    }

    /// `c_τ(Z)` where recorded.
    pub fn chern(&self, class: SurfaceClass, triv: Trivialization) -> Option<i64> {
        use SurfaceClass::{Cover, Z};
        use Trivialization::*;
        let (p, q) = (self.kp.p(), self.kp.q());
        match (class, triv) {
            (SurfaceClass::Page, Orbibundle) => Some(0),
            (SurfaceClass::Page, Constant) => Some(p + q),
            (SurfaceClass::Page, Page) => Some(p + q - p * q),
            (Cover(Orbit::Q), SurfaceQ) | (Cover(Orbit::P), SurfaceP) | (Z(Orbit::H), SurfaceH) => {
                Some(p + q)
            }
            (Z(Orbit::P) | Z(Orbit::Q) | Z(Orbit::H) | Z(Orbit::B), Orbibundle) => Some(0),
            _ => None,
        }
    }

    /// `Q_orb(Z_a, Z_b)` for unit classes; the diagonal gives `Q_orb(Z_a)`.
    pub fn q_orb(&self, a: Orbit, b: Orbit) -> i64 {
        use Orbit::*;
        let (p, q) = (self.kp.p(), self.kp.q());
        match (a, b) {
            (P, P) | (Q, Q) => -1,
            (B, B) | (H, H) => p * q - p - q,
            (P, Q) | (Q, P) => 1,
            (P, B) | (B, P) | (P, H) | (H, P) => q,
            (Q, B) | (B, Q) | (Q, H) | (H, Q) => p,
            (H, B) | (B, H) => p * q,
        }
    }

    /// `Q_τ(Z_b)` for the three trivializations over the binding.
    pub fn q_binding(&self, triv: Trivialization) -> Option<i64> {
        let (p, q) = (self.kp.p(), self.kp.q());
        match triv {
            Trivialization::Page => Some(0),
            Trivialization::Orbibundle => Some(p * q - p - q),
            Trivialization::Constant => Some(p * q),
            _ => None,
        }
    }

    /// `τ_orb(u) − τ(u)` on the unit orbit `u` of `orbit`: `b`, `h`, `p^p` or
    /// `q^q` (the latter two for surface trivializations).
    pub fn offset_from_orb(&self, orbit: Orbit, triv: Trivialization) -> Result<i64> {
        use Orbit::*;
        use Trivialization::*;
        let (p, q) = (self.kp.p(), self.kp.q());
        let mismatch = || Error::TrivializationMismatch {
            triv: triv.to_string(),
            orbit: orbit.to_string(),
        };
        if !triv.defined_on(orbit) {
            return Err(mismatch());
        }
        Ok(match (orbit, triv) {
            (_, Orbibundle) => 0,
            // τ_0(b) − τ_orb(b) = p + q, and τ_p = τ_q = τ_h = τ_0 on b.
            (B, Constant | SurfaceP | SurfaceQ | SurfaceH) => -(p + q),
            (B, Page) => p * q - p - q,
            // τ_h(h) = τ_0(h), τ_h(h) − τ_orb(h) = p + q.
            (H, Constant | SurfaceH) => -(p + q),
            (P, SurfaceP) | (Q, SurfaceQ) => -(p + q),
            _ => return Err(mismatch()),
        })
    }

    /// `τ(a) − τ(b)` over a shared orbit.
    pub fn offset(&self, orbit: Orbit, a: Trivialization, b: Trivialization) -> Result<i64> {
        Ok(self.offset_from_orb(orbit, b)? - self.offset_from_orb(orbit, a)?)
    }
}

/// `CZ_τ(γ^k) = CZ_orb(γ^k) + 2·(turns)·(τ_orb − τ)`, where `turns` counts
/// unit orbits (`p^p` and `q^q` for the surface trivializations on `p`, `q`).
pub fn cz_in_triv(
    orbit: Orbit,
    iterate: u32,
    triv: Trivialization,
    kp: &KnotParams,
) -> Result<i64> {
    let ledger = InvariantLedger::new(*kp);
    let shift = ledger.offset_from_orb(orbit, triv)?;
    let unit = match (orbit, triv) {
        (Orbit::P, Trivialization::SurfaceP) => kp.p() as u32,
        (Orbit::Q, Trivialization::SurfaceQ) => kp.q() as u32,
        _ => 1,
    };
    if iterate % unit != 0 {
        return Err(Error::TrivializationMismatch {
            triv: triv.to_string(),
            orbit: format!("{orbit}^{iterate}"),
        });
    }
    let turns = (iterate / unit) as i64;
    Ok(cz_orb(orbit, iterate, kp) + 2 * turns * shift)
}

/// Prefix sums `Σ_{i≤m} CZ_orb(γ^i)` for each orbit, grown on demand.
#[derive(Clone, Debug)]
pub struct IndexTable {
    kp: KnotParams,
    prefix: [Vec<i64>; 4],
}

impl IndexTable {
    pub fn new(kp: KnotParams) -> Self {
        IndexTable {
            kp,
            prefix: [vec![0], vec![0], vec![0], vec![0]],
        }
    }

    pub fn with_capacity(kp: KnotParams, max_iterate: u32) -> Self {
        let mut t = IndexTable::new(kp);
        for orbit in Orbit::ALL {
            t.grow(orbit, max_iterate);
        }
        t
    }

    pub fn knot(&self) -> &KnotParams {
        &self.kp
    }

    fn slot(orbit: Orbit) -> usize {
        orbit as usize
    }

    fn grow(&mut self, orbit: Orbit, upto: u32) {
        let kp = self.kp;
        let v = &mut self.prefix[Self::slot(orbit)];
        while v.len() <= upto as usize {
            let i = v.len() as u32;
            let last = *v.last().unwrap();
            v.push(last + cz_orb(orbit, i, &kp));
        }
    }

    /// `CZ^I_orb(γ^m)`.
    pub fn cz_total(&mut self, orbit: Orbit, m: u32) -> i64 {
        self.grow(orbit, m);
        self.prefix[Self::slot(orbit)][m as usize]
    }

    /// Same as [`cz_total`](Self::cz_total) without growing the cache.
    pub fn cz_total_cached(&self, orbit: Orbit, m: u32) -> i64 {
        match self.prefix[Self::slot(orbit)].get(m as usize) {
            Some(v) => *v,
            None => (1..=m).map(|i| cz_orb(orbit, i, &self.kp)).sum(),
        }
    }

    pub fn ech_index(&self, c: &ReebCurrent) -> i64 {
        let cz = self.cz_total_cached(Orbit::B, c.b)
            + 2 * (self.kp.p() + self.kp.q()) * c.h as i64
            + self.cz_total_cached(Orbit::P, c.p)
            + self.cz_total_cached(Orbit::Q, c.q);
        closed_form_without_cz(c, &self.kp) + cz
    }
}

fn closed_form_without_cz(c: &ReebCurrent, kp: &KnotParams) -> i64 {
    let (p, q) = (kp.p(), kp.q());
    let (bb, hh, pp, qq) = (c.b as i64, c.h as i64, c.p as i64, c.q as i64);
    -(pp - qq) * (pp - qq)
        + 2 * q * pp * (hh + bb)
        + 2 * p * qq * (hh + bb)
        + (p * q - p - q) * (hh * hh + bb * bb)
        + 2 * hh * bb * p * q
}

/// ECH index of an admissible current, by the closed formula
/// `−(P−Q)² + 2qP(H+B) + 2pQ(H+B) + (pq−p−q)(H²+B²) + 2HBpq + CZ`.
pub fn ech_index(c: &ReebCurrent, kp: &KnotParams) -> i64 {
    let cz: i64 = (1..=c.b).map(|i| cz_orb(Orbit::B, i, kp)).sum::<i64>()
        + 2 * (kp.p() + kp.q()) * c.h as i64
        + (1..=c.p).map(|i| cz_orb(Orbit::P, i, kp)).sum::<i64>()
        + (1..=c.q).map(|i| cz_orb(Orbit::Q, i, kp)).sum::<i64>();
    closed_form_without_cz(c, kp) + cz
}

/// Recomputes `I = c_orb + Q_orb + CZ^I_orb` term by term from the ledger and
/// checks it against [`ech_index`].
pub fn ech_index_from_components(c: &ReebCurrent, kp: &KnotParams) -> Result<i64> {
    let ledger = InvariantLedger::new(*kp);
    let chern: i64 = Orbit::ALL
        .iter()
        .map(|&o| {
            c.mult(o) as i64
                * ledger
                    .chern(SurfaceClass::Z(o), Trivialization::Orbibundle)
                    .unwrap_or_default()
        })
        .sum();
    let mut pairing = 0i64;
    for (i, &a) in Orbit::ALL.iter().enumerate() {
        for &b in &Orbit::ALL[i..] {
            let (m, n) = (c.mult(a) as i64, c.mult(b) as i64);
            let weight = if a == b { 1 } else { 2 };
            pairing += weight * m * n * ledger.q_orb(a, b);
        }
    }
    let cz: i64 = Orbit::ALL
        .iter()
        .flat_map(|&o| (1..=c.mult(o)).map(move |i| (o, i)))
        .map(|(o, i)| match o {
            // h contributes 2(p+q) per copy, never a cover.
            Orbit::H => cz_orb(o, 1, kp),
            _ => cz_orb(o, i, kp),
        })
        .sum();
    let total = chern + pairing + cz;
    let expected = ech_index(c, kp);
    if total != expected {
        return Err(Error::Inconsistency(format!(
            "component index {total} != closed form {expected} for {c}"
        )));
    }
    Ok(total)
}

/// Page-trivialization route for pure binding currents:
/// `c_Σ(B[Σ]) + Q_Σ(B Z_b) + CZ^I_Σ(b^B)`.
pub fn binding_index_in_page(b: u32, kp: &KnotParams) -> i64 {
    let ledger = InvariantLedger::new(*kp);
    let bb = b as i64;
    let chern = bb
        * ledger
            .chern(SurfaceClass::Page, Trivialization::Page)
            .unwrap();
    let pairing = bb * bb * ledger.q_binding(Trivialization::Page).unwrap();
    let cz: i64 = (1..=b)
        .map(|i| cz_in_triv(Orbit::B, i, Trivialization::Page, kp).unwrap())
        .sum();
    chern + pairing + cz
}

/// Sum of `CZ_orb` over the top iterate of each embedded orbit in `c`.
fn top_iterates(c: &ReebCurrent, kp: &KnotParams) -> i64 {
    Orbit::ALL
        .iter()
        .filter(|&&o| c.mult(o) > 0)
        .map(|&o| cz_orb(o, c.mult(o), kp))
        .sum()
}

/// `J₀(α, β) = I(α) − I(β) − Σ CZ_orb(α_i^{m_i}) + Σ CZ_orb(β_j^{n_j})`.
pub fn j0_index(alpha: &ReebCurrent, beta: &ReebCurrent, kp: &KnotParams) -> i64 {
    ech_index(alpha, kp) - ech_index(beta, kp) - top_iterates(alpha, kp) + top_iterates(beta, kp)
}

/// One row of the CZ table: an orbit iterate with its action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CzRow {
    pub orbit: Orbit,
    pub iterate: u32,
    pub action: crate::numeric::Rat,
    pub cz: i64,
}

impl CzRow {
    pub fn name(&self) -> String {
        ReebCurrent::orbit(self.orbit, self.iterate).to_string()
    }
}

/// All orbit iterates with action `≤ max_action`, sorted by action, then
/// `CZ_orb`, then orbit in the order `p, q, h, b`.
pub fn cz_table(kp: &KnotParams, max_action: &crate::numeric::Rat) -> Vec<CzRow> {
    use crate::current::action;
    let rank = |o: Orbit| match o {
        Orbit::P => 0,
        Orbit::Q => 1,
        Orbit::H => 2,
        Orbit::B => 3,
    };
    let mut rows = Vec::new();
    for orbit in Orbit::ALL {
        let mut i = 1u32;
        loop {
            let c = ReebCurrent::orbit(orbit, i);
            let a = action(&c, kp).expect("limit mode");
            if &a > max_action {
                break;
            }
            rows.push(CzRow {
                orbit,
                iterate: i,
                action: a,
                cz: cz_orb(orbit, i, kp),
            });
            i += 1;
        }
    }
    rows.sort_by(|x, y| {
        x.action
            .cmp(&y.action)
            .then(x.cz.cmp(&y.cz))
            .then(rank(x.orbit).cmp(&rank(y.orbit)))
    });
    rows
}
