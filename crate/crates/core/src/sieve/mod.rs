//! η windows, admissibility, language tables and pattern frequencies.

mod frequency;
mod language;
mod maximality;
mod word;

use std::collections::BTreeSet;

pub use frequency::{
    block_distribution, entropy_estimate, mirsky_frequency, EntropyConfig, EntropyPoint, EntropyReport,
    FrequencyMode, FrequencyReport,
};
pub use language::{hereditary_closure, DEFAULT_ETA_WINDOW, language_blocks, language_for_subshift, LanguageTable, Source};
pub use maximality::{maximality_audit, MaximalityEntry, MaximalityReport};
pub use word::{block, Word, MAX_BLOCK_LEN};

use crate::bset::BSet;
use crate::error::Result;

/// η = 1_{F_B} on `[a, z]`. Divisibility at negative `n` is decided by `|n|`,
/// and position 0 is never free.
pub fn eta_window(b: &BSet, a: i64, z: i64) -> Result<Word> {
    if z < a {
        return Ok(Word::zeros(a, 0));
    }
    let reach = a.unsigned_abs().max(z.unsigned_abs());
    let moduli = b.enumerate_exact(reach)?;
    let len = (z - a + 1) as usize;
    let mut free = vec![true; len];
    for &m in &moduli {
        let m = m as i64;
        // first multiple of m that is >= a
        let mut k = a.div_euclid(m) * m;
        if k < a {
            k += m;
        }
        while k <= z {
            free[(k - a) as usize] = false;
            k += m;
        }
    }
    if a <= 0 && 0 <= z {
        free[(-a) as usize] = false;
    }
    Ok(Word::from_bits(a, free))
}

/// `supp(w) mod b` with representatives in `[0, b)`.
pub fn residue_profile(w: &Word, b: u64) -> BTreeSet<u64> {
    w.support()
        .iter()
        .map(|&s| s.rem_euclid(b as i64) as u64)
        .collect()
}

/// True iff `support` misses some residue class modulo every `b` in `moduli`.
pub fn admissible_mod(support: &[i64], moduli: &[u64]) -> bool {
    let mut seen: Vec<bool> = Vec::new();
    for &b in moduli {
        if (support.len() as u64) < b {
            continue;
        }
        seen.clear();
        seen.resize(b as usize, false);
        let mut hit = 0u64;
        for &s in support {
            let r = s.rem_euclid(b as i64) as usize;
            if !seen[r] {
                seen[r] = true;
                hit += 1;
                if hit == b {
                    return false;
                }
            }
        }
    }
    true
}

/// B-admissibility of a word. Only `b <= |supp(w)|` can have every class
/// hit, so the test is exact for infinite `B` within its enumeration bound.
pub fn is_admissible(w: &Word, b: &BSet) -> bool {
    let moduli = b.enumerate(w.ones() as u64);
    admissible_mod(w.support(), &moduli)
}

/// Admissibility is shift invariant; this recomputes both sides so the
/// property can be exercised as a self test.
pub fn translation_invariance_check(w: &Word, t: i64, b: &BSet) -> bool {
    is_admissible(w, b) == is_admissible(&w.translate(t), b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b23() -> BSet {
        BSet::explicit([2, 3]).unwrap()
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta_window(&b23(), 0, 6).unwrap().to_string(), "0100010@0");
        assert_eq!(eta_window(&BSet::prime_squares(), 0, 0).unwrap().to_string(), "0@0");
        // 1,2,3 squarefree; 4 not; 5,6,7 squarefree; 8 not
        assert_eq!(
            eta_window(&BSet::prime_squares(), 1, 8).unwrap().to_string(),
            "11101110@1"
        );
    }

    #[test]
    fn eta_is_symmetric() {
        let w = eta_window(&BSet::prime_squares(), -40, 40).unwrap();
        for n in 1..=40 {
            assert_eq!(w.bit(n), w.bit(-n));
        }
        assert!(!w.bit(0));
    }

    #[test]
    fn admissible_examples() {
        let b2 = BSet::explicit([2]).unwrap();
        assert!(!is_admissible(&"11".parse().unwrap(), &b2));
        assert!(is_admissible(&"101".parse().unwrap(), &b2));
        assert!(!is_admissible(&"1111".parse().unwrap(), &BSet::prime_squares()));
        assert!(is_admissible(&"111".parse().unwrap(), &BSet::prime_squares()));
        assert!(is_admissible(&Word::empty(), &b2));
    }

    #[test]
    fn translation_examples() {
        let b2 = BSet::explicit([2]).unwrap();
        assert!(translation_invariance_check(&"101".parse().unwrap(), 7, &b2));
        assert!(translation_invariance_check(&"1111".parse().unwrap(), -3, &BSet::prime_squares()));
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_profile(&"101".parse().unwrap(), 4), BTreeSet::from([0, 2]));
        let eta = eta_window(&b23(), 1, 12).unwrap();
        assert_eq!(eta.support(), &[1, 5, 7, 11]);
        assert_eq!(residue_profile(&eta, 3), BTreeSet::from([1, 2]));
        assert!(residue_profile(&Word::empty(), 5).is_empty());
    }
}
