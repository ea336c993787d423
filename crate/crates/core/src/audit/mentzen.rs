use std::fmt;

use serde::Serialize;

use crate::bset::BSet;
use crate::caps::Caps;
use crate::codes::Code;
use crate::error::{Error, Result};
use crate::sieve::{block, eta_window, language_for_subshift};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MentzenNormal {
    /// Exactly one single-support block maps to 1; its 1 sits at offset `k`.
    Shift { k: i64 },
    /// No single-support block maps to 1, so τ(0^{-N}10^N) = 0^Z.
    NoSingleton,
    /// Two single-support blocks map to 1, at offsets `k1 < k2`; `s = k2 - k1`.
    Multiple { k1: i64, k2: i64, s: i64 },
}

/// Inspect the `2ℓ+1` single-support blocks of the domain.
pub fn mentzen_normalize(c: &Code) -> MentzenNormal {
    let l = c.window();
    let r = c.radius() as i64;
    let hits: Vec<i64> = (0..l)
        .map(|p| 1u64 << (l - 1 - p))
        .filter(|&v| c.in_domain(v) && c.phi(v).unwrap_or(false))
        .map(|v| (l - 1 - v.trailing_zeros() as usize) as i64 - r)
        .collect();
    match hits.as_slice() {
        [] => MentzenNormal::NoSingleton,
        [k] => MentzenNormal::Shift { k: *k },
        [k1, k2, ..] => MentzenNormal::Multiple {
            k1: *k1,
            k2: *k2,
            s: k2 - k1,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum L1Evidence {
    /// τ(0^{-N}10^N) = 0^Z: neither injective nor pre-injective.
    ImageOfSingleOneVanishes,
    /// Two single-support blocks map to 1.
    TwoSingletons { k1: i64, k2: i64, s: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MentzenVerdict {
    /// Equal to S^k on the language and fixes η on the scanned window.
    ShiftPower { k: i64, eta_window: u64 },
    RejectedByL1 { evidence: L1Evidence },
    /// A language block with 0 at offset `k` maps to 1.
    RejectedByL2 { k: i64, block: String },
    /// τ(x) <= S^k x holds on the language, but S^{-k}τ moves η: an
    /// automorphism would contradict maximality of η.
    RejectedByMaximality { k: i64, position: i64, block: String },
    Inconclusive { reason: String },
}

impl MentzenVerdict {
    pub fn shift_power(&self) -> Option<i64> {
        match self {
            MentzenVerdict::ShiftPower { k, .. } => Some(*k),
            _ => None,
        }
    }
}

impl fmt::Display for MentzenVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MentzenVerdict::ShiftPower { k, eta_window } => {
                write!(f, "ShiftPower({k}) (η fixed on [-{eta_window}, {eta_window}])")
            }
            MentzenVerdict::RejectedByL1 { evidence } => match evidence {
                L1Evidence::ImageOfSingleOneVanishes => write!(f, "RejectedByL1: τ(0^-N 1 0^N) = 0^Z"),
                L1Evidence::TwoSingletons { k1, k2, s } => {
                    write!(f, "RejectedByL1: single 1s at {k1} and {k2} both map to 1 (s = {s})")
                }
            },
            MentzenVerdict::RejectedByL2 { k, block } => write!(f, "RejectedByL2({block}) after shift({})", -k),
            MentzenVerdict::RejectedByMaximality { k, position, block } => write!(
                f,
                "RejectedByMaximality: S^{}τ changes η at {position} (window {block})",
                -k
            ),
            MentzenVerdict::Inconclusive { reason } => write!(f, "Inconclusive: {reason}"),
        }
    }
}

/// Normalize, then check that every language block with a 0 at offset `k`
/// maps to 0, then that the normalized map fixes η on `[-window, window]`.
/// Language blocks come from [`language_for_subshift`] with the same window.
pub fn mentzen_filter(c: &Code, b: &BSet, window: u64, caps: &Caps) -> Result<MentzenVerdict> {
    let k = match mentzen_normalize(c) {
        MentzenNormal::Shift { k } => k,
        MentzenNormal::NoSingleton => {
            return Ok(MentzenVerdict::RejectedByL1 {
                evidence: L1Evidence::ImageOfSingleOneVanishes,
            })
        }
        MentzenNormal::Multiple { k1, k2, s } => {
            return Ok(MentzenVerdict::RejectedByL1 {
                evidence: L1Evidence::TwoSingletons { k1, k2, s },
            })
        }
    };
    let l = c.window();
    let r = c.radius() as i64;
    let p = (k + r) as usize;
    let lang = language_for_subshift(b, l, window, caps)?;
    for &v in lang.blocks() {
        if !c.in_domain(v) || block::bit(v, l, p) {
            continue;
        }
        if c.phi(v)? {
            return Ok(MentzenVerdict::RejectedByL2 {
                k,
                block: block::to_string(v, l),
            });
        }
    }

    let w = window as i64;
    let eta = eta_window(b, -w, w)?;
    let bits = eta.bits();
    let reach = r + k.abs();
    for n in (-w + reach)..=(w - reach) {
        let start = (n - r + w) as usize;
        let v = bits[start..start + l].iter().fold(0u64, |v, &x| v << 1 | x as u64);
        let img = match c.phi(v) {
            Ok(x) => x,
            Err(Error::OffDomain(blk)) => {
                return Ok(MentzenVerdict::Inconclusive {
                    reason: format!("η window {blk} lies outside the code's domain"),
                })
            }
            Err(e) => return Err(e),
        };
        if img != eta.bit(n + k) {
            return Ok(MentzenVerdict::RejectedByMaximality {
                k,
                position: n + k,
                block: block::to_string(v, l),
            });
        }
    }
    Ok(MentzenVerdict::ShiftPower { k, eta_window: window })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq() -> BSet {
        BSet::prime_squares()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(mentzen_normalize(&Code::identity()), MentzenNormal::Shift { k: 0 });
        assert_eq!(mentzen_normalize(&Code::shift(2)), MentzenNormal::Shift { k: 2 });
        let two = Code::from_ones(1, [0b100, 0b001]).unwrap();
        assert_eq!(
            mentzen_normalize(&two),
            MentzenNormal::Multiple { k1: -1, k2: 1, s: 2 }
        );
        assert_eq!(mentzen_normalize(&Code::and_mask(&[0, 1])), MentzenNormal::NoSingleton);
    }

    #[test]
    fn filter_examples() {
        let caps = Caps::default();
        for k in [-2, 0, 5] {
            assert_eq!(
                mentzen_filter(&Code::shift(k), &sq(), 300, &caps).unwrap().shift_power(),
                Some(k)
            );
        }
        let flipped = Code::from_ones(1, [0b010, 0b011, 0b110, 0b111, 0b101]).unwrap();
        assert_eq!(
            mentzen_filter(&flipped, &sq(), 300, &caps).unwrap(),
            MentzenVerdict::RejectedByL2 {
                k: 0,
                block: "101".into()
            }
        );
        // passes the l2 check but deletes isolated 1s of η
        let lonely = Code::from_ones(1, [0b010]).unwrap();
        assert!(matches!(
            mentzen_filter(&lonely, &sq(), 300, &caps).unwrap(),
            MentzenVerdict::RejectedByMaximality { k: 0, .. }
        ));
    }
}
