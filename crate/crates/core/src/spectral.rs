//! Spectral invariants read off the sequence `N_k(p,q)`.

use num_bigint::{BigInt, BigUint, Sign};
use rayon::prelude::*;
use serde::Serialize;

use crate::current::KnotParams;
use crate::error::{Error, Result};
use crate::lattice::{nk_closed_form, NSeq};
use crate::numeric::{InfRat, Rat};

/// Decimal digits carried by certified square roots.
pub const DEFAULT_DIGITS: u32 = 20;

/// Certified enclosure `lower ≤ e_k ≤ upper` of `c_k − √(2k·vol)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylError {
    pub lower: Rat,
    pub upper: Rat,
}

impl WeylError {
    pub fn midpoint(&self) -> f64 {
        ((&self.lower + &self.upper).to_f64()) / 2.0
    }

    /// Upper bound for `|e_k|`.
    pub fn abs_upper(&self) -> Rat {
        self.lower.abs().max(self.upper.abs())
    }

    pub fn width(&self) -> Rat {
        &self.upper - &self.lower
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    pub k: u64,
    pub ck: Rat,
    #[serde(rename = "ckLink")]
    pub ck_link: InfRat,
    #[serde(rename = "weylError")]
    pub weyl_error: WeylError,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationMode {
    /// `rot(b) = pq`: the linking spectrum is `N_k(p,q)`.
    ExactPq,
    /// `rot(b) = pq + δ`: ties are broken by `δ·(repeats − 1)`.
    PqPlusDelta,
}

/// Encloses `N/pq − √(2k/pq)` using `√(2k·pq)·10^digits` rounded outward.
pub fn weyl_error(kp: &KnotParams, k: u64, n: i64, digits: u32) -> WeylError {
    let pq = kp.pq();
    let scale = BigUint::from(10u32).pow(digits);
    let radicand = BigUint::from(2 * k) * BigUint::from(pq as u64) * &scale * &scale;
    let root = radicand.sqrt();
    let exact = &root * &root == radicand;
    let denom = BigInt::from(pq) * BigInt::from_biguint(Sign::Plus, scale.clone());
    let ck_scaled = BigInt::from(n) * BigInt::from_biguint(Sign::Plus, scale);
    let root = BigInt::from_biguint(Sign::Plus, root);
    let upper = Rat::from_big(&ck_scaled - &root, denom.clone());
    let lower = if exact {
        upper.clone()
    } else {
        Rat::from_big(&ck_scaled - &root - 1, denom)
    };
    WeylError { lower, upper }
}

fn sequence(kp: &KnotParams, k_max: u64) -> NSeq {
    NSeq::with_len(*kp, k_max as usize + 1)
}

/// `c_k = N_k(p,q)/pq` for `k = 0..=k_max`, which is `N_k(1/q, 1/p)`
/// after clearing denominators.
pub fn action_spectrum(kp: &KnotParams, k_max: u64) -> Vec<SpectrumEntry> {
    let seq = sequence(kp, k_max);
    let (values, repeats) = (seq.values(), seq.repeat_counts());
    (0..=k_max)
        .into_par_iter()
        .map(|k| {
            let n = values[k as usize];
            SpectrumEntry {
                k,
                ck: Rat::new(n, kp.pq()),
                ck_link: InfRat::new(Rat::integer(n), repeats[k as usize] as i64 - 1),
                weyl_error: weyl_error(kp, k, n, DEFAULT_DIGITS),
            }
        })
        .collect()
}

/// The knot-filtration level at which the degree `2k` class first appears.
pub fn linking_spectrum(kp: &KnotParams, k_max: u64, mode: RotationMode) -> Vec<InfRat> {
    let seq = sequence(kp, k_max);
    (0..=k_max as usize)
        .map(|k| {
            let n = Rat::integer(seq.values()[k]);
            match mode {
                RotationMode::ExactPq => InfRat::from_rat(n),
                RotationMode::PqPlusDelta => InfRat::new(n, seq.repeat_counts()[k] as i64 - 1),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylScan {
    pub entries: Vec<(u64, WeylError)>,
    /// Certified upper bound for `sup |e_k|` over the scan.
    pub sup_abs: Rat,
    pub sup_at: u64,
}

/// `e_k` for `k = k_min..=k_max`.
pub fn weyl_scan(kp: &KnotParams, k_min: u64, k_max: u64) -> WeylScan {
    let seq = sequence(kp, k_max);
    let values = seq.values();
    let entries: Vec<(u64, WeylError)> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| (k, weyl_error(kp, k, values[k as usize], DEFAULT_DIGITS)))
        .collect();
    let (sup_at, sup_abs) = entries
        .iter()
        .map(|(k, e)| (*k, e.abs_upper()))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .unwrap_or((0, Rat::zero()));
    WeylScan {
        entries,
        sup_abs,
        sup_at,
    }
}

/// `e_k` at the `n`-th special index predicted by the closed form
/// `(√(8pqk + (p+q+1)²) − (p+q+1))/(2pq) − √(2k/pq)`, in floating point.
pub fn closed_form_weyl_error(kp: &KnotParams, n: u64) -> Result<(u64, f64)> {
    let point = nk_closed_form(kp, n)?;
    let (p, q, k) = (kp.p() as f64, kp.q() as f64, point.k as f64);
    let s = p + q + 1.0;
    let predicted =
        ((8.0 * p * q * k + s * s).sqrt() - s) / (2.0 * p * q) - (2.0 * k / (p * q)).sqrt();
    Ok((point.k, predicted))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Obstruction {
    Consistent {
        k_max: u64,
    },
    ObstructedAt {
        k: u64,
    },
    /// `pq < p'q'`: the volume hypothesis fails, so nothing is claimed.
    NotApplicable,
}

/// Scans `N_k(p,q) ≥ N_k(p',q')` for `k ≤ k_max`.
pub fn cobordism_obstruction(from: &KnotParams, to: &KnotParams, k_max: u64) -> Obstruction {
    if from.pq() < to.pq() {
        return Obstruction::NotApplicable;
    }
    let a = sequence(from, k_max);
    let b = sequence(to, k_max);
    match (0..=k_max as usize).find(|&k| a.values()[k] < b.values()[k]) {
        Some(k) => Obstruction::ObstructedAt { k: k as u64 },
        None => Obstruction::Consistent { k_max },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundResult {
    #[serde(rename = "hypothesisMet")]
    pub hypothesis_met: bool,
    /// The threshold the hypothesis compares against.
    pub threshold: Rat,
    pub bound: Option<f64>,
}

fn sqrt_rat(x: &Rat) -> f64 {
    x.to_f64().sqrt()
}

/// Action–linking bound: if `V < pq/(pq+Δ)²` then some orbit has the
/// ratio bounded by `√(V/pq)`.
pub fn action_linking_bound(
    kp: &KnotParams,
    delta: &Rat,
    volume: &Rat,
    action_of_b: &Rat,
) -> Result<BoundResult> {
    if !delta.is_positive() || !volume.is_positive() {
        return Err(Error::InvalidArgument("Δ and V must be positive".into()));
    }
    if action_of_b != &Rat::integer(1) {
        return Err(Error::InvalidArgument(
            "the binding must have action 1".into(),
        ));
    }
    let pq = Rat::integer(kp.pq());
    let shifted = &pq + delta;
    let threshold = pq.clone() / (&shifted * &shifted);
    let met = volume < &threshold;
    Ok(BoundResult {
        hypothesis_met: met,
        threshold,
        bound: met.then(|| sqrt_rat(&(volume.clone() / pq))),
    })
}

/// Calabi mean-action bound with `θ₀ = 1/pq + d`: if `Cal < pq·θ₀²` the
/// bound is `√(Cal/pq)`.
pub fn calabi_mean_action_bound(kp: &KnotParams, d: &Rat, calabi: &Rat) -> Result<BoundResult> {
    let inv = Rat::new(1, kp.pq());
    if !(d > &(-inv.clone()) && !d.is_positive()) {
        return Err(Error::InvalidArgument(format!(
            "d = {d} must lie in (-1/pq, 0]"
        )));
    }
    if !calabi.is_positive() {
        return Err(Error::InvalidArgument(
            "the Calabi invariant must be positive".into(),
        ));
    }
    let pq = Rat::integer(kp.pq());
    let theta = &inv + d;
    let threshold = &pq * &(&theta * &theta);
    let met = calabi < &threshold;
    Ok(BoundResult {
        hypothesis_met: met,
        threshold,
        bound: met.then(|| sqrt_rat(&(calabi.clone() / pq))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::nk;

    fn kp(p: i64, q: i64) -> KnotParams {
        KnotParams::new(p, q).unwrap()
    }

    #[test]
    fn action_spectrum_examples() {
        let s = action_spectrum(&kp(3, 4), 10);
        assert_eq!(s[1].ck, Rat::new(1, 4));
        assert_eq!(s[0].ck, Rat::zero());
        assert_eq!(s[10].ck, Rat::integer(1));
        assert_eq!(s[10].ck_link, InfRat::frac(12, 1, 1));
        assert_eq!(
            s[0].weyl_error,
            WeylError {
                lower: Rat::zero(),
                upper: Rat::zero()
            }
        );
    }

    #[test]
    fn linking_examples() {
        let k = kp(3, 4);
        assert_eq!(
            linking_spectrum(&k, 1, RotationMode::ExactPq)[1],
            InfRat::integer(3)
        );
        assert_eq!(
            linking_spectrum(&k, 10, RotationMode::PqPlusDelta)[10],
            InfRat::frac(12, 1, 1)
        );
        assert_eq!(
            linking_spectrum(&k, 0, RotationMode::PqPlusDelta)[0],
            InfRat::zero()
        );
    }

    #[test]
    fn weyl_enclosure_is_tight() {
        let k = kp(3, 4);
        for kk in [1u64, 2, 10, 77, 1000] {
            let e = weyl_error(&k, kk, nk(&k, kk), DEFAULT_DIGITS);
            assert!(e.lower <= e.upper);
            assert!(e.width() <= Rat::from_big(1.into(), BigInt::from(10).pow(DEFAULT_DIGITS)));
            let float = nk(&k, kk) as f64 / 12.0 - (2.0 * kk as f64 / 12.0).sqrt();
            assert!((e.midpoint() - float).abs() < 1e-12);
        }
        // 2k/pq = 1 is a perfect square, so the enclosure collapses.
        let n = nk(&kp(2, 3), 3);
        let e = weyl_error(&kp(2, 3), 3, n, 10);
        assert_eq!(e.lower, e.upper);
        assert_eq!(e.upper, Rat::new(n - 6, 6));
    }

    #[test]
    fn weyl_closed_form_tends_to_limit() {
        let k = kp(3, 4);
        let (_, e) = closed_form_weyl_error(&k, 2000).unwrap();
        assert!((e + 1.0 / 3.0).abs() < 1e-3, "{e}");
    }

    #[test]
    fn obstruction_examples() {
        assert_eq!(
            cobordism_obstruction(&kp(2, 7), &kp(3, 4), 100),
            Obstruction::ObstructedAt { k: 1 }
        );
        assert_eq!(
            cobordism_obstruction(&kp(3, 4), &kp(2, 3), 10_000),
            Obstruction::Consistent { k_max: 10_000 }
        );
        assert_eq!(
            cobordism_obstruction(&kp(5, 7), &kp(5, 7), 500),
            Obstruction::Consistent { k_max: 500 }
        );
        assert_eq!(
            cobordism_obstruction(&kp(2, 3), &kp(3, 4), 10),
            Obstruction::NotApplicable
        );
    }

    #[test]
    fn bound_examples() {
        let r = action_linking_bound(
            &kp(2, 3),
            &Rat::new(1, 10),
            &Rat::new(1, 10),
            &Rat::integer(1),
        )
        .unwrap();
        assert!(r.hypothesis_met);
        assert_eq!(r.threshold, Rat::new(600, 3721));
        assert!((r.bound.unwrap() - (1.0f64 / 60.0).sqrt()).abs() < 1e-12);

        let r = action_linking_bound(
            &kp(3, 4),
            &Rat::new(1, 100),
            &Rat::new(1, 20),
            &Rat::integer(1),
        )
        .unwrap();
        assert!(r.hypothesis_met);
        assert!((r.bound.unwrap() - (1.0f64 / 240.0).sqrt()).abs() < 1e-12);

        let r = action_linking_bound(
            &kp(2, 3),
            &Rat::new(1, 10),
            &Rat::new(600, 3721),
            &Rat::integer(1),
        )
        .unwrap();
        assert!(!r.hypothesis_met);
        assert_eq!(r.bound, None);
        assert!(action_linking_bound(
            &kp(2, 3),
            &Rat::new(1, 10),
            &Rat::new(1, 10),
            &Rat::new(1, 2)
        )
        .is_err());
        assert!(
            action_linking_bound(&kp(2, 3), &Rat::zero(), &Rat::new(1, 10), &Rat::integer(1))
                .is_err()
        );
    }

    #[test]
    fn calabi_examples() {
        let r = calabi_mean_action_bound(&kp(2, 3), &Rat::new(-1, 20), &Rat::new(1, 20)).unwrap();
        assert!(r.hypothesis_met);
        assert_eq!(r.threshold, Rat::new(49, 600));
        assert!((r.bound.unwrap() - (1.0f64 / 120.0).sqrt()).abs() < 1e-12);

        let cal = Rat::new(1, 2 * 36);
        let r = calabi_mean_action_bound(&kp(2, 3), &Rat::zero(), &cal).unwrap();
        assert!(r.hypothesis_met);
        assert!((r.bound.unwrap() - (cal.to_f64() / 6.0).sqrt()).abs() < 1e-15);

        let r = calabi_mean_action_bound(&kp(2, 3), &Rat::new(-1, 20), &Rat::new(49, 600)).unwrap();
        assert!(!r.hypothesis_met);
        assert!(calabi_mean_action_bound(&kp(2, 3), &Rat::new(-1, 6), &cal).is_err());
        assert!(calabi_mean_action_bound(&kp(2, 3), &Rat::new(1, 100), &cal).is_err());
    }
}
