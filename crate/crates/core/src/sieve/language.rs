use std::collections::HashSet;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::word::block;
use super::{eta_window, Word};
use crate::bset::{BSet, BSetKind};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// Where the blocks of a [`LanguageTable`] come from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Source {
    /// Every B-admissible block (the language of X_B).
    Admissible,
    /// Factors of η on `[1, window]`: a lower approximation of the X_η language.
    EtaScan { window: u64 },
    /// Closure of another source under coordinatewise decrease.
    HereditaryClosure(Box<Source>),
}

impl Source {
    pub fn hereditary_eta(window: u64) -> Self {
        Source::HereditaryClosure(Box::new(Source::EtaScan { window }))
    }

    pub fn is_hereditary(&self) -> bool {
        matches!(self, Source::Admissible | Source::HereditaryClosure(_))
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Admissible => write!(f, "admissible"),
            Source::EtaScan { window } => write!(f, "eta:{window}"),
            Source::HereditaryClosure(inner) => write!(f, "hered({inner})"),
        }
    }
}

pub const DEFAULT_ETA_WINDOW: u64 = 10_000;

impl FromStr for Source {
    type Err = Error;
    /// `admissible`, `eta:N`, `hered`, `hered:N` or `hered(<source>)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::MalformedSpec(format!("unknown source {s:?}"));
        if s == "admissible" {
            return Ok(Source::Admissible);
        }
        if s == "hered" {
            return Ok(Source::hereditary_eta(DEFAULT_ETA_WINDOW));
        }
        if let Some(inner) = s.strip_prefix("hered(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Source::HereditaryClosure(Box::new(inner.parse()?)));
        }
        if let Some(n) = s.strip_prefix("hered:") {
            return Ok(Source::hereditary_eta(n.parse().map_err(|_| bad())?));
        }
        if let Some(n) = s.strip_prefix("eta:") {
            return Ok(Source::EtaScan {
                window: n.parse().map_err(|_| bad())?,
            });
        }
        Err(bad())
    }
}

/// The set of length-`n` blocks from one source, kept sorted
/// (lexicographically, which is numeric order of the encoding).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageTable {
    n: usize,
    blocks: Vec<u64>,
    source: Source,
}

impl LanguageTable {
    pub fn new(n: usize, blocks: impl IntoIterator<Item = u64>, source: Source) -> Result<Self> {
        block::check_len(n)?;
        let mut blocks: Vec<u64> = blocks.into_iter().collect();
        if let Some(&bad) = blocks.iter().find(|&&v| v > block::mask(n)) {
            return Err(Error::MalformedSpec(format!("block {bad} longer than {n}")));
        }
        blocks.sort_unstable();
        blocks.dedup();
        Ok(LanguageTable { n, blocks, source })
    }

    /// Every block of length `n`.
    pub fn full(n: usize, caps: &Caps) -> Result<Self> {
        block::check_len(n)?;
        if n >= 63 || (1usize << n) > caps.table {
            return Err(Error::Blowup {
                what: format!("full table of length {n}"),
                cap: caps.table,
            });
        }
        Ok(LanguageTable {
            n,
            blocks: (0..1u64 << n).collect(),
            source: Source::Admissible,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn contains(&self, v: u64) -> bool {
        self.blocks.binary_search(&v).is_ok()
    }

    pub fn contains_str(&self, s: &str) -> bool {
        block::parse(s).is_ok_and(|(v, n)| n == self.n && self.contains(v))
    }

    pub fn strings(&self) -> Vec<String> {
        self.blocks.iter().map(|&v| block::to_string(v, self.n)).collect()
    }

    pub fn is_subset(&self, other: &LanguageTable) -> bool {
        self.n == other.n && self.blocks.iter().all(|&v| other.contains(v))
    }

    /// Closed under removing a single 1 from any member.
    pub fn is_hereditary(&self) -> bool {
        self.blocks.iter().all(|&v| {
            block::support(v, self.n).all(|p| self.contains(v & !(1 << (self.n - 1 - p))))
        })
    }

    /// Sorted newline-separated block strings.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        for s in self.strings() {
            writeln!(out, "{s}")?;
        }
        Ok(())
    }

    pub fn read_text(n: usize, text: &str, source: Source) -> Result<Self> {
        let mut blocks = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (v, len) = block::parse(line)?;
            if len != n {
                return Err(Error::MalformedSpec(format!("block {line:?} has length {len}, expected {n}")));
            }
            blocks.push(v);
        }
        Self::new(n, blocks, source)
    }

    /// Compact bitset: byte `i / 8`, bit `i % 8` (little-endian) is set iff
    /// the lexicographically `i`-th block of length `n` is in the table.
    pub fn to_bitset(&self) -> Result<Vec<u8>> {
        if self.n > 32 {
            return Err(Error::Blowup {
                what: format!("bitset of 2^{} bits", self.n),
                cap: 1 << 32,
            });
        }
        let mut bytes = vec![0u8; ((1u64 << self.n) as usize).div_ceil(8)];
        for &v in &self.blocks {
            bytes[(v / 8) as usize] |= 1 << (v % 8);
        }
        Ok(bytes)
    }

    pub fn from_bitset(n: usize, bytes: &[u8], source: Source) -> Result<Self> {
        block::check_len(n)?;
        let expected = ((1u64 << n.min(40)) as usize).div_ceil(8);
        if n > 32 || bytes.len() != expected {
            return Err(Error::MalformedSpec(format!(
                "bitset for n = {n} must have {expected} bytes, got {}",
                bytes.len()
            )));
        }
        let blocks = bytes.iter().enumerate().flat_map(|(i, &byte)| {
            (0..8).filter(move |j| byte >> j & 1 == 1).map(move |j| (i * 8 + j) as u64)
        });
        Self::new(n, blocks, source)
    }

    fn check_cap(&self, caps: &Caps) -> Result<()> {
        if self.blocks.len() > caps.table {
            return Err(Error::Blowup {
                what: format!("language table of length {}", self.n),
                cap: caps.table,
            });
        }
        Ok(())
    }
}

impl Serialize for LanguageTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LanguageTable", 4)?;
        st.serialize_field("block_length", &self.n)?;
        st.serialize_field("source", &self.source.to_string())?;
        st.serialize_field("count", &self.blocks.len())?;
        st.serialize_field("blocks", &self.strings())?;
        st.end()
    }
}

/// Length-`n` blocks of `b` drawn from `source`.
pub fn language_blocks(b: &BSet, n: usize, source: &Source, caps: &Caps) -> Result<LanguageTable> {
    block::check_len(n)?;
    let table = match source {
        Source::Admissible => admissible_blocks(b, n, caps)?,
        Source::EtaScan { window } => {
            let eta = eta_window(b, 1, *window as i64)?;
            eta_factors(&eta, n, source.clone(), caps)?
        }
        Source::HereditaryClosure(inner) => {
            let base = language_blocks(b, n, inner, caps)?;
            hereditary_closure(&base, source.clone(), caps)?
        }
    };
    table.check_cap(caps)?;
    Ok(table)
}

/// The table the audits should treat as the language of X_η: the admissible
/// language when `B` is an Erdős candidate (there X_η = X_B), otherwise the
/// hereditary closure of an η scan.
pub fn language_for_subshift(b: &BSet, n: usize, window: u64, caps: &Caps) -> Result<LanguageTable> {
    let source = if is_erdos_kind(b) {
        Source::Admissible
    } else {
        Source::hereditary_eta(window)
    };
    language_blocks(b, n, &source, caps)
}

pub(crate) fn is_erdos_kind(b: &BSet) -> bool {
    matches!(b.kind(), BSetKind::PrimePowers { k, prime_bound: None } if *k >= 2)
}

/// Depth-first enumeration over bit positions, pruning as soon as some
/// modulus has every residue class hit. Only `b <= n` can saturate.
fn admissible_blocks(b: &BSet, n: usize, caps: &Caps) -> Result<LanguageTable> {
    let moduli = b.enumerate_exact(n as u64)?;
    let full: Vec<u64> = moduli.iter().map(|&m| block::mask(m as usize)).collect();
    let mut masks = vec![0u64; moduli.len()];
    let mut out = Vec::new();

    struct Ctx<'a> {
        n: usize,
        moduli: &'a [u64],
        full: &'a [u64],
        cap: usize,
    }

    fn dfs(ctx: &Ctx, p: usize, v: u64, masks: &mut [u64], out: &mut Vec<u64>) -> Result<()> {
        if p == ctx.n {
            if out.len() >= ctx.cap {
                return Err(Error::Blowup {
                    what: format!("admissible table of length {}", ctx.n),
                    cap: ctx.cap,
                });
            }
            out.push(v);
            return Ok(());
        }
        dfs(ctx, p + 1, v << 1, masks, out)?;
        let saved: Vec<u64> = masks.to_vec();
        let mut ok = true;
        for (i, &m) in ctx.moduli.iter().enumerate() {
            masks[i] |= 1 << (p as u64 % m);
            if masks[i] == ctx.full[i] {
                ok = false;
                break;
            }
        }
        if ok {
            dfs(ctx, p + 1, v << 1 | 1, masks, out)?;
        }
        masks.copy_from_slice(&saved);
        Ok(())
    }

    let ctx = Ctx {
        n,
        moduli: &moduli,
        full: &full,
        cap: caps.table,
    };
    dfs(&ctx, 0, 0, &mut masks, &mut out)?;
    Ok(LanguageTable {
        n,
        blocks: out,
        source: Source::Admissible,
    })
}

pub(crate) fn eta_factors(eta: &Word, n: usize, source: Source, caps: &Caps) -> Result<LanguageTable> {
    let bits = eta.bits();
    if bits.len() < n {
        return LanguageTable::new(n, [], source);
    }
    let mask = block::mask(n);
    let mut seen = HashSet::new();
    let mut v = 0u64;
    for (i, &bit) in bits.iter().enumerate() {
        v = (v << 1 | bit as u64) & mask;
        if i + 1 >= n {
            seen.insert(v);
            if seen.len() > caps.table {
                return Err(Error::Blowup {
                    what: format!("eta scan of length {n}"),
                    cap: caps.table,
                });
            }
        }
    }
    LanguageTable::new(n, seen, source)
}

/// Downward closure of a table under coordinatewise decrease.
pub fn hereditary_closure(base: &LanguageTable, source: Source, caps: &Caps) -> Result<LanguageTable> {
    let n = base.n;
    if n <= 22 {
        let size = 1usize << n;
        let mut present = vec![false; size];
        for &v in &base.blocks {
            present[v as usize] = true;
        }
        for i in 0..n {
            let bit = 1usize << i;
            for v in 0..size {
                if v & bit != 0 && present[v] {
                    present[v ^ bit] = true;
                }
            }
        }
        let blocks: Vec<u64> = (0..size as u64).filter(|&v| present[v as usize]).collect();
        if blocks.len() > caps.table {
            return Err(Error::Blowup {
                what: format!("hereditary closure of length {n}"),
                cap: caps.table,
            });
        }
        return Ok(LanguageTable { n, blocks, source });
    }
    let mut seen: HashSet<u64> = HashSet::new();
    for &v in &base.blocks {
        let mut s = v;
        loop {
            seen.insert(s);
            if seen.len() > caps.table {
                return Err(Error::Blowup {
                    what: format!("hereditary closure of length {n}"),
                    cap: caps.table,
                });
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & v;
        }
    }
    LanguageTable::new(n, seen, source)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn admissible_for_two() {
        let t = language_blocks(&BSet::explicit([2]).unwrap(), 2, &Source::Admissible, &caps()).unwrap();
        assert_eq!(t.strings(), vec!["00", "01", "10"]);
    }

    #[test]
    fn prime_squares_contain_111() {
        let sq = BSet::prime_squares();
        let t = language_blocks(&sq, 3, &Source::Admissible, &caps()).unwrap();
        assert!(t.contains_str("111"));
        let scan = language_blocks(&sq, 3, &Source::EtaScan { window: 50 }, &caps()).unwrap();
        assert!(scan.contains_str("111"));
        assert!(scan.is_subset(&t));
    }

    #[test]
    fn closure_of_single_block() {
        let base = LanguageTable::new(2, [0b11], Source::EtaScan { window: 0 }).unwrap();
        let c = hereditary_closure(&base, Source::hereditary_eta(0), &caps()).unwrap();
        assert_eq!(c.strings(), vec!["00", "01", "10", "11"]);
        assert!(c.is_hereditary());
    }

    #[test]
    fn sparse_closure_matches_dense() {
        let sq = BSet::prime_squares();
        let scan = language_blocks(&sq, 23, &Source::EtaScan { window: 400 }, &caps()).unwrap();
        let sparse = hereditary_closure(&scan, Source::hereditary_eta(400), &caps()).unwrap();
        assert!(sparse.is_hereditary());
        assert!(scan.is_subset(&sparse));
    }

    #[test]
    fn source_parse_round_trip() {
        for s in ["admissible", "eta:500", "hered(eta:500)", "hered(admissible)"] {
            assert_eq!(s.parse::<Source>().unwrap().to_string(), s);
        }
        assert_eq!("hered:30".parse::<Source>().unwrap(), Source::hereditary_eta(30));
        assert!("bogus".parse::<Source>().is_err());
    }

    #[test]
    fn bitset_and_text_round_trip() {
        let t = language_blocks(&BSet::prime_squares(), 5, &Source::Admissible, &caps()).unwrap();
        let bytes = t.to_bitset().unwrap();
        assert_eq!(bytes.len(), 4);
        assert_eq!(LanguageTable::from_bitset(5, &bytes, Source::Admissible).unwrap(), t);
        let mut text = Vec::new();
        t.write_text(&mut text).unwrap();
        let back = LanguageTable::read_text(5, std::str::from_utf8(&text).unwrap(), Source::Admissible).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn table_cap() {
        let tiny = Caps { table: 3, ..Caps::default() };
        assert!(matches!(
            language_blocks(&BSet::prime_squares(), 4, &Source::Admissible, &tiny),
            Err(Error::Blowup { .. })
        ));
    }
}
