//! Finite-scale audits of codes on B-free subshifts: Garden-of-Eden blocks,
//! pre-injectivity violations, preimage multiplicities and the
//! normalize/filter pipeline for automorphisms.

mod mentzen;
mod report;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

pub use mentzen::{mentzen_filter, mentzen_normalize, L1Evidence, MentzenNormal, MentzenVerdict};
pub use report::{goe_report, AuditConfig, AuditReport, CheckStatus, CodeSummary, Crosscheck};

use crate::bset::BSet;
use crate::caps::Caps;
use crate::codes::{apply_to_finite_config, Code};
use crate::error::{Error, Result};
use crate::sieve::{block, language_blocks, LanguageTable, Source, Word, MAX_BLOCK_LEN};

/// Does some block of `table` start with the `k`-bit prefix `pv`?
fn has_prefix(table: &LanguageTable, pv: u64, k: usize) -> bool {
    let shift = (table.n() - k) as u32;
    let lo = (pv as u128) << shift;
    let hi = ((pv as u128) + 1) << shift;
    let blocks = table.blocks();
    let i = blocks.partition_point(|&x| (x as u128) < lo);
    i < blocks.len() && (blocks[i] as u128) < hi
}

/// Every block of length `m + 2ℓ` (restricted to `lang_in` when given)
/// whose image is the length-`m` block `target`. Windows outside the code's
/// domain never produce a preimage.
pub fn preimage_search(
    c: &Code,
    target: u64,
    m: usize,
    lang_in: Option<&LanguageTable>,
    caps: &Caps,
) -> Result<Vec<u64>> {
    let l = c.window();
    let n_in = m + l - 1;
    if m == 0 || n_in > MAX_BLOCK_LEN {
        return Err(Error::BlockLength(n_in));
    }
    if let Some(t) = lang_in {
        if t.n() != n_in {
            return Err(Error::MalformedSpec(format!(
                "input table has length {}, expected {n_in}",
                t.n()
            )));
        }
    }
    struct Search<'a> {
        c: &'a Code,
        target: u64,
        m: usize,
        l: usize,
        n_in: usize,
        lang: Option<&'a LanguageTable>,
        cap: usize,
        out: Vec<u64>,
    }
    fn go(s: &mut Search, len: usize, v: u64) -> Result<()> {
        if let Some(t) = s.lang {
            if !has_prefix(t, v, len) {
                return Ok(());
            }
        }
        if len >= s.l {
            let window = v & block::mask(s.l);
            let i = len - s.l;
            if !s.c.in_domain(window) || s.c.phi(window)? != block::bit(s.target, s.m, i) {
                return Ok(());
            }
        }
        if len == s.n_in {
            if s.out.len() >= s.cap {
                return Err(Error::Blowup {
                    what: "preimage list".into(),
                    cap: s.cap,
                });
            }
            s.out.push(v);
            return Ok(());
        }
        go(s, len + 1, v << 1)?;
        go(s, len + 1, v << 1 | 1)
    }
    let mut s = Search {
        c,
        target,
        m,
        l,
        n_in,
        lang: lang_in,
        cap: caps.table,
        out: Vec::new(),
    };
    go(&mut s, 0, 0)?;
    Ok(s.out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoeDefect {
    pub block: String,
    /// Size of the input table every candidate preimage was drawn from.
    pub searched: usize,
}

fn image_counts(c: &Code, lang_in: &LanguageTable) -> Result<HashMap<u64, usize>> {
    let mut counts = HashMap::new();
    for &v in lang_in.blocks() {
        match c.image_block(v, lang_in.n()) {
            Ok(img) => *counts.entry(img).or_insert(0) += 1,
            Err(Error::OffDomain(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(counts)
}

/// Blocks of `lang_out` with no preimage in `lang_in`; each is re-checked
/// by [`preimage_search`].
pub fn surjectivity_defects(
    c: &Code,
    lang_out: &LanguageTable,
    lang_in: &LanguageTable,
    caps: &Caps,
) -> Result<Vec<GoeDefect>> {
    let n = lang_out.n();
    if lang_in.n() != n + c.window() - 1 {
        return Err(Error::MalformedSpec(format!(
            "input table length {} must be {} + {}",
            lang_in.n(),
            n,
            c.window() - 1
        )));
    }
    let images = image_counts(c, lang_in)?;
    let mut out = Vec::new();
    for &v in lang_out.blocks() {
        if images.contains_key(&v) {
            continue;
        }
        if !preimage_search(c, v, n, Some(lang_in), caps)?.is_empty() {
            return Err(Error::PostconditionFailed(format!(
                "block {} has a preimage after all",
                block::to_string(v, n)
            )));
        }
        out.push(GoeDefect {
            block: block::to_string(v, n),
            searched: lang_in.len(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationPair {
    pub x: Word,
    pub y: Word,
    /// The common image, trimmed to its support.
    pub image: Word,
}

#[derive(Debug, Clone, Serialize)]
pub struct PreInjectivityReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub source: String,
    pub configurations: usize,
    pub distinct_images: usize,
    pub pairs_total: usize,
    pub pairs: Vec<ViolationPair>,
    pub truncated: bool,
    pub note: String,
}

/// Listed pairs per report; the total is always counted.
pub const MAX_LISTED_PAIRS: usize = 256;

/// Finite configurations supported in `[-N, N]` (zero background) with equal
/// images. Each group of equal images is reported as pairs against its
/// sparsest member.
pub fn pre_injectivity_audit(c: &Code, b: &BSet, big_n: u64, source: &Source, caps: &Caps) -> Result<PreInjectivityReport> {
    if !source.is_hereditary() {
        return Err(Error::NonHereditarySource(source.to_string()));
    }
    if !c.vanishes_at_zero() {
        return Err(Error::NonVanishingAtZero);
    }
    let width = 2 * big_n as usize + 1;
    let table = language_blocks(b, width, source, caps)?;
    if table.len() > caps.configurations {
        return Err(Error::Blowup {
            what: format!("configurations on [-{big_n}, {big_n}]"),
            cap: caps.configurations,
        });
    }
    let mut groups: BTreeMap<Vec<i64>, Vec<Word>> = BTreeMap::new();
    for &v in table.blocks() {
        let x = Word::from_block(v, width, -(big_n as i64)).trimmed();
        let img = apply_to_finite_config(c, &x)?;
        groups.entry(img.support().to_vec()).or_default().push(x);
    }
    let mut pairs = Vec::new();
    let mut total = 0;
    for (img, mut members) in groups.iter().map(|(k, v)| (k, v.clone())) {
        if members.len() < 2 {
            continue;
        }
        members.sort_by_key(|w| {
            (
                w.ones(),
                w.support().iter().map(|s| s.unsigned_abs()).max(),
                w.support().to_vec(),
            )
        });
        total += members.len() - 1;
        let image = Word::from_finite_support(img.iter().copied());
        for y in &members[1..] {
            if pairs.len() < MAX_LISTED_PAIRS {
                pairs.push(ViolationPair {
                    x: y.clone(),
                    y: members[0].clone(),
                    image: image.clone(),
                });
            }
        }
    }
    let note = if total == 0 {
        format!("no violation among configurations supported in [-{big_n}, {big_n}]; evidence only")
    } else {
        "each pair differs in finitely many coordinates and has equal images: τ is not pre-injective".into()
    };
    Ok(PreInjectivityReport {
        n: big_n,
        source: table.source().to_string(),
        configurations: table.len(),
        distinct_images: groups.len(),
        pairs_total: total,
        truncated: total > pairs.len(),
        pairs,
        note,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityPoint {
    pub n: usize,
    pub defects: usize,
    pub max_multiplicity: usize,
    pub distinct_images: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Flat,
    Growing,
    Irregular,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityReport {
    pub source: String,
    pub series: Vec<MultiplicityPoint>,
    pub trend: Trend,
    pub note: String,
}

impl MultiplicityReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,defects,multiplicity\n");
        for p in &self.series {
            let _ = writeln!(s, "{},{},{}", p.n, p.defects, p.max_multiplicity);
        }
        s
    }
}

/// Largest number of length-`(n+2ℓ)` preimages of a length-`n` block, for
/// `n = 1..=n_max`.
pub fn bounded_to_one_evidence(c: &Code, b: &BSet, source: &Source, n_max: usize, caps: &Caps) -> Result<MultiplicityReport> {
    let mut series = Vec::new();
    for n in 1..=n_max {
        let lang_out = language_blocks(b, n, source, caps)?;
        let lang_in = language_blocks(b, n + c.window() - 1, source, caps)?;
        let counts = image_counts(c, &lang_in)?;
        let present: HashSet<u64> = counts.keys().copied().collect();
        series.push(MultiplicityPoint {
            n,
            defects: lang_out.blocks().iter().filter(|v| !present.contains(v)).count(),
            max_multiplicity: counts.values().copied().max().unwrap_or(0),
            distinct_images: counts.len(),
        });
    }
    let mults: Vec<usize> = series.iter().map(|p| p.max_multiplicity).collect();
    let trend = if mults.windows(2).all(|w| w[0] == w[1]) {
        Trend::Flat
    } else if mults.windows(2).all(|w| w[0] <= w[1]) {
        Trend::Growing
    } else {
        Trend::Irregular
    };
    let note = match trend {
        Trend::Flat => "flat multiplicity: consistent with a bounded-to-one map".into(),
        Trend::Growing => "multiplicity grows with n: evidence against pre-injectivity".into(),
        Trend::Irregular => "multiplicity neither flat nor monotone".into(),
    };
    Ok(MultiplicityReport {
        source: source.to_string(),
        series,
        trend,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq_table(n: usize) -> LanguageTable {
        language_blocks(&BSet::prime_squares(), n, &Source::Admissible, &Caps::default()).unwrap()
    }

    #[test]
    fn preimages() {
        let caps = Caps::default();
        let id = Code::identity();
        assert_eq!(preimage_search(&id, 0b01, 2, None, &caps).unwrap(), vec![0b01]);
        let and = Code::and_mask(&[0, 1]);
        let pre = preimage_search(&and, 0b11, 2, Some(&sq_table(4)), &caps).unwrap();
        assert!(!pre.is_empty());
        assert!(pre.iter().all(|&v| v & 0b0111 == 0b0111));
        assert!(preimage_search(&and, 0b1110, 4, Some(&sq_table(6)), &caps).unwrap().is_empty());
        // without the table the forced preimage 1111 reappears
        assert!(!preimage_search(&and, 0b1110, 4, None, &caps).unwrap().is_empty());
    }

    #[test]
    fn defects() {
        let caps = Caps::default();
        let and = Code::and_mask(&[0, 1]);
        let d = surjectivity_defects(&and, &sq_table(4), &sq_table(6), &caps).unwrap();
        assert!(d.iter().any(|g| g.block == "1110"));
        assert!(surjectivity_defects(&Code::identity(), &sq_table(4), &sq_table(4), &caps)
            .unwrap()
            .is_empty());
        assert!(surjectivity_defects(&Code::shift(2), &sq_table(4), &sq_table(8), &caps)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn pre_injectivity() {
        let caps = Caps::default();
        let b = BSet::prime_squares();
        let r = pre_injectivity_audit(&Code::and_mask(&[0, 1]), &b, 4, &Source::Admissible, &caps).unwrap();
        let single = Word::from_finite_support([0]);
        assert!(r
            .pairs
            .iter()
            .any(|p| p.x == single && p.y == Word::empty() && p.image.ones() == 0));
        for c in [Code::identity(), Code::shift(3)] {
            let r = pre_injectivity_audit(&c, &b, 4, &Source::Admissible, &caps).unwrap();
            assert_eq!(r.pairs_total, 0);
        }
        assert_eq!(
            pre_injectivity_audit(&Code::negation(), &b, 2, &Source::Admissible, &caps).unwrap_err(),
            Error::NonVanishingAtZero
        );
        assert!(matches!(
            pre_injectivity_audit(&Code::identity(), &b, 2, &Source::EtaScan { window: 100 }, &caps),
            Err(Error::NonHereditarySource(_))
        ));
    }

    #[test]
    fn multiplicities() {
        let caps = Caps::default();
        let b = BSet::prime_squares();
        let id = bounded_to_one_evidence(&Code::identity(), &b, &Source::Admissible, 6, &caps).unwrap();
        assert!(id.series.iter().all(|p| p.max_multiplicity == 1 && p.defects == 0));
        assert_eq!(id.trend, Trend::Flat);
        let zero = bounded_to_one_evidence(&Code::all_zero(0), &b, &Source::Admissible, 4, &caps).unwrap();
        assert_eq!(zero.series[3].max_multiplicity, sq_table(4).len());
        let and = bounded_to_one_evidence(&Code::and_mask(&[0, 1]), &b, &Source::Admissible, 6, &caps).unwrap();
        assert_eq!(and.trend, Trend::Growing);
        assert!(and.to_csv().starts_with("n,defects,multiplicity\n1,"));
    }
}
