use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::language::eta_factors;
use super::word::block;
use super::language::hereditary_closure;
use super::{eta_window, Source};
use crate::arith::{self, lcm_checked};
use crate::bset::BSet;
use crate::caps::Caps;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyMode {
    /// Counted over one full period lcm(B_K).
    Exact { period: u64 },
    /// Period exceeded the cap; counted over starting positions `1..=window`.
    Sampled { window: u64, period_exceeded: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct FrequencyReport {
    pub block: String,
    pub truncation: Vec<u64>,
    #[serde(serialize_with = "arith::serialize_rational")]
    pub frequency: BigRational,
    pub mode: FrequencyMode,
}

/// Visit the B_K-free indicator at positions `start..start+count` in order.
fn walk_free(bk: &[u64], start: u64, count: u64, mut visit: impl FnMut(bool)) {
    let mut residues: Vec<u64> = bk.iter().map(|&b| start % b).collect();
    for _ in 0..count {
        let free = residues.iter().all(|&r| r != 0);
        visit(free);
        for (r, &b) in residues.iter_mut().zip(bk) {
            *r += 1;
            if *r == b {
                *r = 0;
            }
        }
    }
}

/// Counts of every length-`n` block over starting positions
/// `start..start+positions`.
fn count_blocks(bk: &[u64], n: usize, start: u64, positions: u64) -> BTreeMap<u64, u64> {
    let mask = block::mask(n);
    let mut counts = BTreeMap::new();
    let mut v = 0u64;
    let mut seen = 0u64;
    walk_free(bk, start, positions + n as u64 - 1, |free| {
        v = (v << 1 | free as u64) & mask;
        seen += 1;
        if seen >= n as u64 {
            *counts.entry(v).or_insert(0) += 1;
        }
    });
    counts
}

fn period_or_sample(bk: &[u64], caps: &Caps) -> (u64, FrequencyMode) {
    match lcm_checked(bk) {
        Some(l) if l <= caps.period as u128 => (0, FrequencyMode::Exact { period: l as u64 }),
        other => (
            1,
            FrequencyMode::Sampled {
                window: caps.sample_window,
                period_exceeded: other
                    .map(|l| l.to_string())
                    .unwrap_or_else(|| arith::lcm_big(bk).to_string()),
            },
        ),
    }
}

/// Cylinder frequency of `block_str` under the Mirsky measure of the
/// truncated set `B_K`: exact over one period, or a labelled sample when
/// the period exceeds the cap.
pub fn mirsky_frequency(block_str: &str, bk: &[u64], caps: &Caps) -> Result<FrequencyReport> {
    let (target, n) = block::parse(block_str)?;
    if bk.contains(&1) {
        return Err(Error::ContainsOne);
    }
    let (start, mode) = period_or_sample(bk, caps);
    let positions = match &mode {
        FrequencyMode::Exact { period } => *period,
        FrequencyMode::Sampled { window, .. } => *window,
    };
    let counts = count_blocks(bk, n, start, positions);
    let hits = counts.get(&target).copied().unwrap_or(0);
    Ok(FrequencyReport {
        block: block_str.trim().to_string(),
        truncation: bk.to_vec(),
        frequency: BigRational::new(BigInt::from(hits), BigInt::from(positions)),
        mode,
    })
}

/// Frequencies of every length-`n` block with nonzero count.
pub fn block_distribution(n: usize, bk: &[u64], caps: &Caps) -> Result<(BTreeMap<String, BigRational>, FrequencyMode)> {
    block::check_len(n)?;
    let (start, mode) = period_or_sample(bk, caps);
    let positions = match &mode {
        FrequencyMode::Exact { period } => *period,
        FrequencyMode::Sampled { window, .. } => *window,
    };
    let dist = count_blocks(bk, n, start, positions)
        .into_iter()
        .map(|(v, c)| {
            (
                block::to_string(v, n),
                BigRational::new(BigInt::from(c), BigInt::from(positions)),
            )
        })
        .collect();
    Ok((dist, mode))
}

#[derive(Debug, Clone)]
pub struct EntropyConfig {
    /// η is scanned on `[1, window]`.
    pub window: u64,
    /// Number of elements of `B` used for d = ν_η(1).
    pub truncation: usize,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        EntropyConfig {
            window: 10_000,
            truncation: 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyPoint {
    pub n: usize,
    pub blocks: usize,
    #[serde(serialize_with = "arith::serialize_sig12")]
    pub estimate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub bset: String,
    pub source: String,
    pub series: Vec<EntropyPoint>,
    pub density: FrequencyReport,
    #[serde(serialize_with = "arith::serialize_sig12")]
    pub density_estimate: f64,
    #[serde(serialize_with = "arith::serialize_sig12")]
    pub final_gap: f64,
    pub prediction: String,
}

/// Block-growth estimates e(n) = log2|table_n| / n over the hereditary
/// closure of the η scan, compared with d = ν_η(1).
pub fn entropy_estimate(b: &BSet, n_max: usize, config: &EntropyConfig, caps: &Caps) -> Result<EntropyReport> {
    block::check_len(n_max)?;
    let eta = eta_window(b, 1, config.window as i64)?;
    let source = Source::hereditary_eta(config.window);
    let mut series = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let scan = eta_factors(&eta, n, Source::EtaScan { window: config.window }, caps)?;
        let table = hereditary_closure(&scan, source.clone(), caps)?;
        let estimate = if table.is_empty() {
            0.0
        } else {
            (table.len() as f64).log2() / n as f64
        };
        series.push(EntropyPoint {
            n,
            blocks: table.len(),
            estimate,
        });
    }
    let bk = b.first(config.truncation)?;
    let density = mirsky_frequency("1", &bk, caps)?;
    let d = arith::rational_to_f64(&density.frequency);
    let last = series.last().map_or(0.0, |p| p.estimate);
    Ok(EntropyReport {
        bset: b.to_string(),
        source: source.to_string(),
        series,
        density_estimate: d,
        final_gap: last - d,
        density,
        prediction: "for the hereditary closure, e(n) -> d = ν_η(1) (entropy d·log 2, here in log2 units)".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use num_traits::{One, Zero};

    #[test]
    fn frequencies_for_two_three() {
        let caps = Caps::default();
        let f = |s| mirsky_frequency(s, &[2, 3], &caps).unwrap().frequency;
        assert_eq!(f("1"), ratio(1, 3));
        assert_eq!(f("11"), ratio(0, 1));
        assert_eq!(f("101"), ratio(1, 6));
    }

    #[test]
    fn distribution_sums_to_one() {
        let caps = Caps::default();
        for n in 1..=6 {
            let (dist, mode) = block_distribution(n, &[4, 9, 25], &caps).unwrap();
            assert!(matches!(mode, FrequencyMode::Exact { period: 900 }));
            let total = dist.values().fold(BigRational::zero(), |a, b| a + b);
            assert!(total.is_one());
        }
    }

    #[test]
    fn sampled_fallback() {
        let caps = Caps {
            period: 10,
            sample_window: 600,
            ..Caps::default()
        };
        let r = mirsky_frequency("1", &[2, 3, 5], &caps).unwrap();
        assert!(matches!(r.mode, FrequencyMode::Sampled { window: 600, .. }));
        // 600 is a multiple of 30, so the sample is exact here
        assert_eq!(r.frequency, ratio(8, 30));
    }

    #[test]
    fn entropy_for_two() {
        let b = BSet::explicit([2]).unwrap();
        let r = entropy_estimate(&b, 10, &EntropyConfig { window: 200, truncation: 1 }, &Caps::default()).unwrap();
        assert_eq!(r.series[0].estimate, 1.0);
        assert_eq!(r.density.frequency, ratio(1, 2));
        // blocks are down-sets of 0101.. patterns: 2 * 2^(n/2) - 1 for even n
        assert_eq!(r.series[9].blocks, 2 * 32 - 1);
    }
}
