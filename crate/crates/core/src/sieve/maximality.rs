use serde::Serialize;

use super::{admissible_mod, eta_window, residue_profile};
use crate::bset::BSet;
use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct MaximalityEntry {
    pub b: u64,
    /// |supp(η) ∩ [-N, N] mod b|
    pub residues_n: usize,
    /// Same count on `[-2N, 2N]`.
    pub residues_2n: usize,
    pub stabilized: bool,
    /// `residues_n == b - 1`: every nonzero class is realised.
    pub saturated: bool,
    pub flips_tested: usize,
    pub flips_inadmissible: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximalityReport {
    pub bset: String,
    pub n: u64,
    pub entries: Vec<MaximalityEntry>,
    /// Moduli whose profile still grows between `N` and `2N`.
    pub not_stabilized: Vec<u64>,
    /// Every flip tested at a saturated modulus produced an inadmissible word.
    pub saturated_flips_all_inadmissible: bool,
}

/// Residue-saturation evidence for the maximality of η: for each `b <= N`,
/// flipping a zero of η at a multiple of `b` adds the class 0, which makes
/// the window inadmissible for `b` exactly when the other `b - 1` classes
/// are already present.
pub fn maximality_audit(b: &BSet, n: u64) -> Result<MaximalityReport> {
    let n = n.max(1);
    let eta = eta_window(b, -(n as i64), n as i64)?;
    let eta2 = eta_window(b, -2 * n as i64, 2 * n as i64)?;
    let mut entries = Vec::new();
    for m in b.enumerate_exact(n)? {
        let r_n = residue_profile(&eta, m).len();
        let r_2n = residue_profile(&eta2, m).len();
        let step = m as i64;
        let mut tested = 0;
        let mut inadmissible = 0;
        let mut pos = -(n as i64 / step) * step;
        while pos <= n as i64 {
            debug_assert!(!eta.bit(pos));
            let flipped = eta.with_bit(pos, true);
            tested += 1;
            if !admissible_mod(flipped.support(), &[m]) {
                inadmissible += 1;
            }
            pos += step;
        }
        entries.push(MaximalityEntry {
            b: m,
            residues_n: r_n,
            residues_2n: r_2n,
            stabilized: r_n == r_2n,
            saturated: r_n as u64 == m - 1,
            flips_tested: tested,
            flips_inadmissible: inadmissible,
        });
    }
    Ok(MaximalityReport {
        bset: b.to_string(),
        n,
        not_stabilized: entries.iter().filter(|e| !e.stabilized).map(|e| e.b).collect(),
        saturated_flips_all_inadmissible: entries
            .iter()
            .filter(|e| e.saturated)
            .all(|e| e.flips_inadmissible == e.flips_tested),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_three_window_twelve() {
        let r = maximality_audit(&BSet::explicit([2, 3]).unwrap(), 12).unwrap();
        let e2 = &r.entries[0];
        let e3 = &r.entries[1];
        assert_eq!((e2.b, e2.residues_n, e3.b, e3.residues_n), (2, 1, 3, 2));
        assert!(e2.saturated && e3.saturated);
        // flips at -12..12 step 2 for b = 2, including position 6
        assert_eq!(e2.flips_tested, 13);
        assert_eq!(e2.flips_inadmissible, 13);
        assert!(r.saturated_flips_all_inadmissible);
        assert!(r.not_stabilized.is_empty());
    }

    #[test]
    fn prime_square_four_stabilizes() {
        let r = maximality_audit(&BSet::prime_squares(), 200).unwrap();
        let e4 = r.entries.iter().find(|e| e.b == 4).unwrap();
        assert_eq!(e4.residues_n, 3);
        assert!(e4.stabilized && e4.saturated);
    }
}
