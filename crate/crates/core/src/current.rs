//! Reeb currents over the four embedded orbits of the perturbed `T(p,q)`
//! fibration: the binding `b`, the hyperbolic orbit `h` and the two singular
//! fibers `p`, `q`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{InfRat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaMode {
    /// The unperturbed `ε → 0` limit.
    Limit,
    /// Perturbation parameters kept as formal symbols.
    Symbolic,
}

impl fmt::Display for DeltaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaMode::Limit => "limit",
            DeltaMode::Symbolic => "symbolic",
        })
    }
}

/// The torus knot type `T(p,q)` together with the perturbation regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KnotParams {
    p: i64,
    q: i64,
    #[serde(rename = "deltaMode")]
    delta_mode: DeltaMode,
}

impl KnotParams {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        Self::with_mode(p, q, DeltaMode::Limit)
    }

    pub fn with_mode(p: i64, q: i64, delta_mode: DeltaMode) -> Result<Self> {
        if p < 1 || q < 1 || p.gcd(&q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Ok(KnotParams { p, q, delta_mode })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn pq(&self) -> i64 {
        self.p * self.q
    }

    pub fn delta_mode(&self) -> DeltaMode {
        self.delta_mode
    }

    /// Euler class `-1/(pq)` of the Seifert fibration.
    pub fn euler_class(&self) -> Rat {
        Rat::new(-1, self.pq())
    }

    /// Self-linking number `pq - p - q` of the binding.
    pub fn self_linking(&self) -> i64 {
        self.pq() - self.p - self.q
    }
}

/// One of the four embedded Reeb orbits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orbit {
    B,
    H,
    P,
    Q,
}

impl Orbit {
    pub const ALL: [Orbit; 4] = [Orbit::B, Orbit::H, Orbit::P, Orbit::Q];

    pub fn symbol(self) -> char {
        match self {
            Orbit::B => 'b',
            Orbit::H => 'h',
            Orbit::P => 'p',
            Orbit::Q => 'q',
        }
    }

    pub fn is_elliptic(self) -> bool {
        !matches!(self, Orbit::H)
    }
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Orbit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "b" => Ok(Orbit::B),
            "h" => Ok(Orbit::H),
            "p" => Ok(Orbit::P),
            "q" => Ok(Orbit::Q),
            _ => Err(Error::Parse {
                what: "orbit",
                input: s.to_string(),
            }),
        }
    }
}

/// Exponent vector `b^B h^H p^P q^Q`.
///
/// The raw vector allows any `H` so that sums can be formed freely; ECH
/// generators are the [admissible](ReebCurrent::is_admissible) ones.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReebCurrent {
    #[serde(rename = "B")]
    pub b: u32,
    #[serde(rename = "H")]
    pub h: u32,
    #[serde(rename = "P")]
    pub p: u32,
    #[serde(rename = "Q")]
    pub q: u32,
}

impl ReebCurrent {
    pub const EMPTY: ReebCurrent = ReebCurrent {
        b: 0,
        h: 0,
        p: 0,
        q: 0,
    };

    pub fn new(b: u32, h: u32, p: u32, q: u32) -> Self {
        ReebCurrent { b, h, p, q }
    }

    pub fn orbit(orbit: Orbit, mult: u32) -> Self {
        let mut c = ReebCurrent::EMPTY;
        *c.mult_mut(orbit) = mult;
        c
    }

    pub fn mult(&self, orbit: Orbit) -> u32 {
        match orbit {
            Orbit::B => self.b,
            Orbit::H => self.h,
            Orbit::P => self.p,
            Orbit::Q => self.q,
        }
    }

    fn mult_mut(&mut self, orbit: Orbit) -> &mut u32 {
        match orbit {
            Orbit::B => &mut self.b,
            Orbit::H => &mut self.h,
            Orbit::P => &mut self.p,
            Orbit::Q => &mut self.q,
        }
    }

    /// Hyperbolic orbits may only appear with multiplicity one.
    pub fn is_admissible(&self) -> bool {
        self.h <= 1
    }

    pub fn is_empty(&self) -> bool {
        *self == ReebCurrent::EMPTY
    }

    /// `self · b^B h^H p^P q^Q`, or `None` on overflow.
    pub fn checked_add(&self, other: &ReebCurrent) -> Option<ReebCurrent> {
        Some(ReebCurrent {
            b: self.b.checked_add(other.b)?,
            h: self.h.checked_add(other.h)?,
            p: self.p.checked_add(other.p)?,
            q: self.q.checked_add(other.q)?,
        })
    }

    pub fn with(&self, orbit: Orbit, extra: u32) -> ReebCurrent {
        let mut c = *self;
        *c.mult_mut(orbit) += extra;
        c
    }

    /// Canonical text form, e.g. `b h p^2 q^4`; the empty current is `∅`.
    pub fn canonical_name(&self) -> String {
        self.to_string()
    }
}

impl std::ops::Add for ReebCurrent {
    type Output = ReebCurrent;
    fn add(self, rhs: ReebCurrent) -> ReebCurrent {
        self.checked_add(&rhs)
            .expect("current multiplicity overflow")
    }
}

impl fmt::Display for ReebCurrent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let mut first = true;
        for orbit in Orbit::ALL {
            let m = self.mult(orbit);
            if m == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if m == 1 {
                write!(f, "{orbit}")?;
            } else {
                write!(f, "{orbit}^{m}")?;
            }
        }
        Ok(())
    }
}

/// Accepts `b h p^2 q^4`, `bhp^2q^4`, `∅`, `empty` and the empty string.
/// Repeated factors multiply (`p p` is `p^2`).
impl FromStr for ReebCurrent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "Reeb current",
            input: s.to_string(),
        };
        let t = s.trim();
        if t.is_empty() || t == "∅" || t == "empty" || t == "1" {
            return Ok(ReebCurrent::EMPTY);
        }
        let mut c = ReebCurrent::EMPTY;
        let mut chars = t.chars().peekable();
        while let Some(ch) = chars.next() {
            if ch.is_whitespace() || ch == '*' || ch == '·' {
                continue;
            }
            let orbit: Orbit = ch.to_string().parse().map_err(|_| err())?;
            let mut exp = 1u32;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut digits = String::new();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(*d);
                    chars.next();
                }
                exp = digits.parse().map_err(|_| err())?;
            }
            let slot = c.mult_mut(orbit);
            *slot = slot.checked_add(exp).ok_or_else(err)?;
        }
        Ok(c)
    }
}

/// `pq(B+H) + qP + pQ`.
pub fn degree(c: &ReebCurrent, kp: &KnotParams) -> i64 {
    kp.pq() * (c.b as i64 + c.h as i64) + kp.q() * c.p as i64 + kp.p() * c.q as i64
}

/// Symplectic action `B + H + P/p + Q/q` in the unperturbed limit.
pub fn action(c: &ReebCurrent, kp: &KnotParams) -> Result<Rat> {
    if kp.delta_mode() != DeltaMode::Limit {
        return Err(Error::InvalidArgument(
            "action is only available in the unperturbed limit".into(),
        ));
    }
    Ok(Rat::new(degree(c, kp), kp.pq()))
}

/// Linking number of two distinct embedded orbits.
pub fn orbit_linking(a: Orbit, b: Orbit, kp: &KnotParams) -> Result<i64> {
    use Orbit::*;
    let (p, q) = (kp.p(), kp.q());
    Ok(match (a, b) {
        (P, Q) | (Q, P) => 1,
        (B, P) | (P, B) | (H, P) | (P, H) => q,
        (B, Q) | (Q, B) | (H, Q) | (Q, H) => p,
        (B, H) | (H, B) => p * q,
        _ => return Err(Error::SelfLinking),
    })
}

/// Bilinear extension of [`orbit_linking`] over multiplicities. Fails when the
/// two currents share an orbit.
pub fn linking(c1: &ReebCurrent, c2: &ReebCurrent, kp: &KnotParams) -> Result<i64> {
    let mut total = 0i64;
    for a in Orbit::ALL {
        for b in Orbit::ALL {
            let (m, n) = (c1.mult(a) as i64, c2.mult(b) as i64);
            if m == 0 || n == 0 {
                continue;
            }
            total += m * n * orbit_linking(a, b, kp)?;
        }
    }
    Ok(total)
}

/// Knot filtration `degree + B·δ`, i.e. `B·rot(b) + ℓ(α, b)` with `rot(b) = pq + δ`.
pub fn knot_filtration(c: &ReebCurrent, kp: &KnotParams) -> InfRat {
    InfRat::new(Rat::integer(degree(c, kp)), c.b as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kp(p: i64, q: i64) -> KnotParams {
        KnotParams::new(p, q).unwrap()
    }

    fn c(s: &str) -> ReebCurrent {
        s.parse().unwrap()
    }

    #[test]
    fn rejects_non_coprime() {
        assert!(KnotParams::new(2, 4).is_err());
        assert!(KnotParams::new(0, 3).is_err());
        assert!(KnotParams::new(1, 1).is_ok());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&c("b"), &kp(3, 4)), 12);
        assert_eq!(degree(&c("p q"), &kp(3, 4)), 7);
        assert_eq!(degree(&ReebCurrent::EMPTY, &kp(3, 4)), 0);
    }

    #[test]
    fn action_examples() {
        assert_eq!(action(&c("b"), &kp(5, 7)).unwrap(), Rat::integer(1));
        assert_eq!(action(&c("p"), &kp(3, 4)).unwrap(), Rat::new(1, 3));
        assert_eq!(action(&c("q^4"), &kp(3, 4)).unwrap(), Rat::integer(1));
        let sym = KnotParams::with_mode(3, 4, DeltaMode::Symbolic).unwrap();
        assert!(action(&c("b"), &sym).is_err());
    }

    #[test]
    fn linking_examples() {
        let k = kp(3, 4);
        assert_eq!(linking(&c("b"), &c("q"), &k).unwrap(), 3);
        assert_eq!(linking(&c("b"), &c("h"), &k).unwrap(), 12);
        assert_eq!(linking(&c("b"), &c("p^2 q"), &k).unwrap(), 11);
        assert_eq!(linking(&c("b"), &c("b"), &k), Err(Error::SelfLinking));
        assert_eq!(linking(&c("b p"), &c("p"), &k), Err(Error::SelfLinking));
    }

    #[test]
    fn filtration_examples() {
        let k = kp(3, 4);
        assert_eq!(knot_filtration(&c("b"), &k), InfRat::frac(12, 1, 1));
        assert_eq!(knot_filtration(&c("q^4"), &k), InfRat::integer(12));
        assert_eq!(knot_filtration(&ReebCurrent::EMPTY, &k), InfRat::zero());
    }

    #[test]
    fn text_form() {
        assert_eq!(ReebCurrent::new(1, 1, 2, 4).to_string(), "b h p^2 q^4");
        assert_eq!(ReebCurrent::new(0, 0, 1, 1).to_string(), "p q");
        assert_eq!(ReebCurrent::EMPTY.to_string(), "∅");
        assert_eq!(c("hpq"), ReebCurrent::new(0, 1, 1, 1));
        assert_eq!(c("p^2q^4"), ReebCurrent::new(0, 0, 2, 4));
        assert_eq!(c("p p q"), ReebCurrent::new(0, 0, 2, 1));
        assert!("x".parse::<ReebCurrent>().is_err());
        assert!("p^".parse::<ReebCurrent>().is_err());
    }

    #[test]
    fn json_form() {
        let v = serde_json::to_value(ReebCurrent::new(1, 0, 2, 3)).unwrap();
        assert_eq!(v, serde_json::json!({"B": 1, "H": 0, "P": 2, "Q": 3}));
    }

    fn arb_current() -> impl Strategy<Value = ReebCurrent> {
        (0u32..6, 0u32..3, 0u32..20, 0u32..20).prop_map(|(b, h, p, q)| ReebCurrent::new(b, h, p, q))
    }

    fn arb_kp() -> impl Strategy<Value = KnotParams> {
        (1i64..12, 1i64..12)
            .prop_filter("coprime", |(p, q)| p.gcd(q) == 1)
            .prop_map(|(p, q)| kp(p, q))
    }

    proptest! {
        #[test]
        fn degree_is_pq_times_action(c in arb_current(), k in arb_kp()) {
            let a = action(&c, &k).unwrap();
            prop_assert_eq!(Rat::integer(degree(&c, &k)), a * Rat::integer(k.pq()));
            prop_assert_eq!(knot_filtration(&c, &k).rat, Rat::integer(degree(&c, &k)));
        }

        #[test]
        fn additive(a in arb_current(), b in arb_current(), k in arb_kp()) {
            let s = a + b;
            prop_assert_eq!(degree(&s, &k), degree(&a, &k) + degree(&b, &k));
            prop_assert_eq!(action(&s, &k).unwrap(), action(&a, &k).unwrap() + action(&b, &k).unwrap());
            prop_assert_eq!(knot_filtration(&s, &k), knot_filtration(&a, &k) + knot_filtration(&b, &k));
        }

        #[test]
        fn linking_symmetric_bilinear(a in arb_current(), b in arb_current(), k in arb_kp()) {
            let sep = |x: ReebCurrent, keep: [bool; 4]| ReebCurrent::new(
                if keep[0] { x.b } else { 0 }, if keep[1] { x.h } else { 0 },
                if keep[2] { x.p } else { 0 }, if keep[3] { x.q } else { 0 });
            // Split orbits into disjoint supports so the linking is defined.
            let x = sep(a, [true, false, true, false]);
            let y = sep(b, [false, true, false, true]);
            let l = linking(&x, &y, &k).unwrap();
            prop_assert_eq!(l, linking(&y, &x, &k).unwrap());
            let doubled = x + x;
            prop_assert_eq!(linking(&doubled, &y, &k).unwrap(), 2 * l);
        }

        #[test]
        fn text_round_trip(c in arb_current()) {
            prop_assert_eq!(c.to_string().parse::<ReebCurrent>().unwrap(), c);
        }
    }
}
