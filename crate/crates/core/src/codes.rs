//! Sliding block codes on {0,1}^Z: τ(x)(n) = φ(x(n-ℓ..n+ℓ)).
//!
//! Blocks of length `2ℓ+1` use the position-free encoding of
//! [`sieve::block`](crate::sieve::block): position 0 (offset `-ℓ`) is the
//! most significant bit, so the truth table order is lexicographic.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::sieve::{block, LanguageTable, Word, MAX_BLOCK_LEN};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Table {
    /// Bitset over all `2^(2ℓ+1)` blocks.
    Dense(Vec<u64>),
    /// The 1-blocks only.
    Sparse(BTreeSet<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    Full,
    /// Only the blocks of this table are mapped; others are off-domain.
    Restricted(LanguageTable),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    radius: usize,
    table: Table,
    domain: Domain,
    name: String,
}

/// Radius above which truth tables are stored sparsely.
const DENSE_RADIUS: usize = 12;

fn window_len(radius: usize) -> Result<usize> {
    let l = 2 * radius + 1;
    if l > MAX_BLOCK_LEN {
        return Err(Error::BlockLength(l));
    }
    Ok(l)
}

impl Code {
    /// Full-domain code whose 1-blocks are `ones`.
    pub fn from_ones(radius: usize, ones: impl IntoIterator<Item = u64>) -> Result<Self> {
        let l = window_len(radius)?;
        let ones: BTreeSet<u64> = ones.into_iter().collect();
        if let Some(&bad) = ones.iter().find(|&&v| v > block::mask(l)) {
            return Err(Error::PartialTable(format!("block {bad} is longer than {l}")));
        }
        let table = if radius <= DENSE_RADIUS {
            let mut bits = vec![0u64; (1usize << l).div_ceil(64)];
            for &v in &ones {
                bits[(v / 64) as usize] |= 1 << (v % 64);
            }
            Table::Dense(bits)
        } else {
            Table::Sparse(ones)
        };
        Ok(Code {
            radius,
            table,
            domain: Domain::Full,
            name: "custom".into(),
        })
    }

    /// Full-domain code from a predicate evaluated on every block.
    pub fn from_fn(radius: usize, caps: &Caps, f: impl Fn(u64) -> bool) -> Result<Self> {
        let l = window_len(radius)?;
        if l > caps.dense_window {
            return Err(Error::Blowup {
                what: format!("truth table of window {l}"),
                cap: caps.dense_window,
            });
        }
        Self::from_ones(radius, (0..1u64 << l).filter(|&v| f(v)))
    }

    /// Truth table listing φ of every block in lexicographic order.
    pub fn from_truth_table(radius: usize, bits: &[bool]) -> Result<Self> {
        let l = window_len(radius)?;
        if l > 30 || bits.len() != 1usize << l {
            return Err(Error::PartialTable(format!(
                "expected {} entries for radius {radius}, got {}",
                1u64.checked_shl(l as u32).unwrap_or(0),
                bits.len()
            )));
        }
        Self::from_ones(
            radius,
            bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64),
        )
    }

    /// Code defined only on the blocks of `domain` (length `2ℓ+1`).
    pub fn restricted(radius: usize, domain: LanguageTable, ones: impl IntoIterator<Item = u64>) -> Result<Self> {
        let l = window_len(radius)?;
        if domain.n() != l {
            return Err(Error::PartialTable(format!(
                "domain has block length {}, radius {radius} needs {l}",
                domain.n()
            )));
        }
        let ones: Vec<u64> = ones.into_iter().collect();
        if let Some(&bad) = ones.iter().find(|&&v| !domain.contains(v)) {
            return Err(Error::OffDomain(block::to_string(bad, l)));
        }
        let mut c = Self::from_ones(radius, ones)?;
        c.domain = Domain::Restricted(domain);
        Ok(c)
    }

    /// The same map with its domain cut down to `domain`.
    pub fn restrict_to(&self, domain: LanguageTable) -> Result<Self> {
        let ones: Vec<u64> = domain
            .blocks()
            .iter()
            .copied()
            .filter(|&v| self.phi_raw(v))
            .collect();
        Code::restricted(self.radius, domain, ones).map(|c| c.named(&self.name))
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn identity() -> Self {
        Self::from_ones(0, [1]).unwrap().named("identity")
    }

    /// φ(u) = u(t), i.e. τ = S^t.
    pub fn shift(t: i64) -> Self {
        let radius = t.unsigned_abs() as usize;
        let l = 2 * radius + 1;
        let p = (t + radius as i64) as usize;
        Self::from_ones(radius, (0..1u64 << l).filter(|&v| block::bit(v, l, p)))
            .unwrap()
            .named(&format!("shift({t})"))
    }

    pub fn all_zero(radius: usize) -> Self {
        Self::from_ones(radius, []).unwrap().named("all_zero")
    }

    /// φ(u) = ∧_{j ∈ offsets} u(j).
    pub fn and_mask(offsets: &[i64]) -> Self {
        let radius = offsets.iter().map(|t| t.unsigned_abs() as usize).max().unwrap_or(0);
        let l = 2 * radius + 1;
        let positions: Vec<usize> = offsets.iter().map(|&t| (t + radius as i64) as usize).collect();
        let name = format!(
            "and_mask({})",
            offsets.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
        );
        Self::from_ones(
            radius,
            (0..1u64 << l).filter(|&v| positions.iter().all(|&p| block::bit(v, l, p))),
        )
        .unwrap()
        .named(&name)
    }

    /// φ(u) = 1 - u(0).
    pub fn negation() -> Self {
        Self::from_ones(0, [0]).unwrap().named("negation")
    }

    /// `identity`, `shift:t`, `all_zero[:ℓ]`, `and_mask:j,k,..`, `negation`.
    pub fn builtin(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
        let bad = || Error::MalformedSpec(format!("unknown builtin {spec:?}"));
        let ints = |s: &str| -> Result<Vec<i64>> {
            s.split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse().map_err(|_| bad()))
                .collect()
        };
        match name {
            "identity" | "id" => Ok(Self::identity()),
            "shift" => match ints(arg)?.as_slice() {
                [t] if t.unsigned_abs() <= 31 => Ok(Self::shift(*t)),
                _ => Err(bad()),
            },
            "all_zero" | "zero" => {
                let r = if arg.is_empty() { 0 } else { arg.trim().parse().map_err(|_| bad())? };
                window_len(r)?;
                Ok(Self::all_zero(r))
            }
            "and_mask" | "and" => {
                let offs = ints(arg)?;
                if offs.is_empty() || offs.iter().any(|t| t.unsigned_abs() > 12) {
                    return Err(bad());
                }
                Ok(Self::and_mask(&offs))
            }
            "negation" | "not" => Ok(Self::negation()),
            _ => Err(bad()),
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn window(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn in_domain(&self, v: u64) -> bool {
        match &self.domain {
            Domain::Full => v <= block::mask(self.window()),
            Domain::Restricted(t) => t.contains(v),
        }
    }

    fn phi_raw(&self, v: u64) -> bool {
        match &self.table {
            Table::Dense(bits) => bits
                .get((v / 64) as usize)
                .is_some_and(|w| (w >> (v % 64)) & 1 == 1),
            Table::Sparse(ones) => ones.contains(&v),
        }
    }

    /// φ of one block; off-domain blocks are an error.
    pub fn phi(&self, v: u64) -> Result<bool> {
        if !self.in_domain(v) {
            return Err(Error::OffDomain(block::to_string(v, self.window())));
        }
        Ok(self.phi_raw(v))
    }

    /// Every block of the declared domain.
    pub fn domain_blocks(&self) -> Result<Vec<u64>> {
        match &self.domain {
            Domain::Full => {
                let l = self.window();
                if l > 30 {
                    return Err(Error::Blowup {
                        what: format!("full domain of window {l}"),
                        cap: 1 << 30,
                    });
                }
                Ok((0..1u64 << l).collect())
            }
            Domain::Restricted(t) => Ok(t.blocks().to_vec()),
        }
    }

    /// U = φ^{-1}(1) within the domain.
    pub fn ones(&self) -> Vec<u64> {
        match (&self.table, &self.domain) {
            (Table::Sparse(ones), Domain::Full) => ones.iter().copied().collect(),
            (Table::Sparse(ones), Domain::Restricted(t)) => {
                ones.iter().copied().filter(|&v| t.contains(v)).collect()
            }
            (Table::Dense(bits), _) => bits
                .iter()
                .enumerate()
                .flat_map(|(i, &w)| {
                    (0..64).filter(move |j| (w >> j) & 1 == 1).map(move |j| (i * 64 + j) as u64)
                })
                .filter(|&v| self.in_domain(v))
                .collect(),
        }
    }

    /// φ(0…0) = 0 (zero block treated as mapped to 0 when off-domain).
    pub fn vanishes_at_zero(&self) -> bool {
        !self.phi_raw(0)
    }

    /// Image of a block of length `m >= 2ℓ+1`: a block of length `m - 2ℓ`.
    pub fn image_block(&self, v: u64, m: usize) -> Result<u64> {
        let l = self.window();
        if m < l {
            return Err(Error::TooShort {
                len: m,
                radius: self.radius,
            });
        }
        let mut out = 0u64;
        for i in 0..=m - l {
            out = out << 1 | self.phi(block::slice(v, m, i, l))? as u64;
        }
        Ok(out)
    }

    /// Serialize as a code file: `radius=ℓ` then the sorted 1-blocks.
    pub fn to_file_string(&self) -> String {
        let l = self.window();
        let ones: Vec<String> = self.ones().iter().map(|&v| block::to_string(v, l)).collect();
        format!("# {}\nradius={}\nones={}\n", self.name, self.radius, ones.join(","))
    }

    /// Parse a code file. Keys: `radius`, then one of `ones=<blocks>`,
    /// `table=<2^(2ℓ+1) chars of 0/1 in lexicographic block order>`, or
    /// `builtin=<name>`; optional `name`.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut radius = None;
        let mut ones = None;
        let mut table = None;
        let mut builtin = None;
        let mut name = None;
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::MalformedSpec(format!("expected key=value, got {line:?}")))?;
            let v = v.trim();
            match k.trim() {
                "radius" => {
                    radius = Some(
                        v.parse::<usize>()
                            .map_err(|_| Error::MalformedSpec(format!("bad radius {v:?}")))?,
                    )
                }
                "ones" => ones = Some(v.to_string()),
                "table" => table = Some(v.to_string()),
                "builtin" => builtin = Some(v.to_string()),
                "name" => name = Some(v.to_string()),
                other => return Err(Error::MalformedSpec(format!("unknown key {other:?}"))),
            }
        }
        let code = if let Some(b) = builtin {
            Self::builtin(&b)?
        } else {
            let radius = radius.ok_or_else(|| Error::MalformedSpec("missing radius".into()))?;
            let l = window_len(radius)?;
            match (ones, table) {
                (Some(list), None) => {
                    let mut vs = Vec::new();
                    for item in list.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
                        let (v, n) = block::parse(item)?;
                        if n != l {
                            return Err(Error::PartialTable(format!(
                                "block {item:?} has length {n}, radius {radius} needs {l}"
                            )));
                        }
                        vs.push(v);
                    }
                    Self::from_ones(radius, vs)?
                }
                (None, Some(bits)) => {
                    let bits: Result<Vec<bool>> = bits
                        .chars()
                        .filter(|c| !c.is_whitespace())
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(Error::MalformedSpec(format!("bad table character {c:?}"))),
                        })
                        .collect();
                    Self::from_truth_table(radius, &bits?)?
                }
                _ => {
                    return Err(Error::MalformedSpec(
                        "code file needs exactly one of ones= or table=".into(),
                    ))
                }
            }
        };
        Ok(match name {
            Some(n) => code.named(&n),
            None => code,
        })
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (radius {}, |U| = {})", self.name, self.radius, self.ones().len())
    }
}

/// Apply τ to a finite word: output covers `[offset+ℓ, offset+len-ℓ)`.
pub fn apply_code(c: &Code, w: &Word) -> Result<Word> {
    let r = c.radius as i64;
    let l = c.window() as u64;
    if w.len() < l {
        return Err(Error::TooShort {
            len: w.len() as usize,
            radius: c.radius,
        });
    }
    let out_start = w.offset() + r;
    let out_len = w.len() - 2 * r as u64;
    let out_end = out_start + out_len as i64; // exclusive
    let support = w.support();
    let window_at = |n: i64| -> u64 {
        let lo = support.partition_point(|&s| s < n - r);
        let hi = support.partition_point(|&s| s <= n + r);
        support[lo..hi]
            .iter()
            .fold(0u64, |v, &s| v | 1 << (l as i64 - 1 - (s - (n - r))))
    };
    let mut ones = Vec::new();
    let zero_is_quiet = c.vanishes_at_zero() && c.in_domain(0);
    if zero_is_quiet {
        // only windows meeting the support can map to 1
        let mut last = i64::MIN;
        for &s in support {
            for n in (s - r).max(out_start).max(last + 1)..=(s + r).min(out_end - 1) {
                if c.phi(window_at(n))? {
                    ones.push(n);
                }
                last = n;
            }
        }
    } else {
        for n in out_start..out_end {
            if c.phi(window_at(n))? {
                ones.push(n);
            }
        }
    }
    Word::from_support(out_start, out_len, ones)
}

/// τ on the configuration equal to `w` and 0 elsewhere. Requires φ(0…0) = 0;
/// the result is trimmed to its support.
pub fn apply_to_finite_config(c: &Code, w: &Word) -> Result<Word> {
    if !c.vanishes_at_zero() {
        return Err(Error::NonVanishingAtZero);
    }
    let pad = 2 * c.radius as u64;
    let trimmed = w.trimmed();
    if trimmed.ones() == 0 {
        return Ok(Word::empty());
    }
    Ok(apply_code(c, &trimmed.padded(pad, pad))?.trimmed())
}

/// `c1 ∘ c2` (apply `c2` first) as a code of radius `ℓ1 + ℓ2`.
pub fn compose(c1: &Code, c2: &Code, caps: &Caps) -> Result<Code> {
    let radius = c1.radius + c2.radius;
    let l = window_len(radius)?;
    if l > caps.dense_window {
        return Err(Error::Blowup {
            what: format!("composed truth table of window {l}"),
            cap: caps.dense_window,
        });
    }
    let restricted = !matches!((&c1.domain, &c2.domain), (Domain::Full, Domain::Full));
    let mut ones = Vec::new();
    let mut domain = Vec::new();
    for v in 0..1u64 << l {
        let inner = match c2.image_block(v, l) {
            Ok(i) => i,
            Err(Error::OffDomain(_)) if restricted => continue,
            Err(e) => return Err(e),
        };
        match c1.phi(inner) {
            Ok(bit) => {
                domain.push(v);
                if bit {
                    ones.push(v);
                }
            }
            Err(Error::OffDomain(_)) if restricted => continue,
            Err(e) => return Err(e),
        }
    }
    let name = format!("{}∘{}", c1.name, c2.name);
    if restricted {
        let table = LanguageTable::new(l, domain, crate::sieve::Source::Admissible)?;
        Ok(Code::restricted(radius, table, ones)?.named(&name))
    } else {
        Ok(Code::from_ones(radius, ones)?.named(&name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub input: String,
    pub image: String,
}

impl Serialize for Violation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Violation", 2)?;
        st.serialize_field("input", &self.input)?;
        st.serialize_field("image", &self.image)?;
        st.end()
    }
}

/// Input blocks (length `n + 2ℓ`) whose image leaves `lang_out` (length `n`).
pub fn consistency_check(c: &Code, lang_in: &LanguageTable, lang_out: &LanguageTable) -> Result<Vec<Violation>> {
    let l = c.window();
    if lang_in.n() != lang_out.n() + l - 1 {
        return Err(Error::MalformedSpec(format!(
            "input table length {} must equal output length {} + {}",
            lang_in.n(),
            lang_out.n(),
            l - 1
        )));
    }
    let mut out = Vec::new();
    for &v in lang_in.blocks() {
        let img = c.image_block(v, lang_in.n())?;
        if !lang_out.contains(img) {
            out.push(Violation {
                input: block::to_string(v, lang_in.n()),
                image: block::to_string(img, lang_out.n()),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// ∩_{u ∈ U} J_u as offsets in `-ℓ..=ℓ`.
    pub set: Vec<i64>,
    /// U is empty; the set is then the whole window.
    pub all_zero_code: bool,
    /// Element of least |t|, ties toward t >= 0.
    pub canonical: Option<i64>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.set.iter().map(i64::to_string).collect();
        write!(f, "{{{}}}", items.join(","))?;
        match self.canonical {
            Some(t) => write!(f, " canonical {t}"),
            None => write!(f, " no witness"),
        }
    }
}

pub(crate) fn witness_of(radius: usize, ones: &[u64]) -> Witness {
    let l = 2 * radius + 1;
    let acc = ones.iter().fold(block::mask(l), |acc, &u| acc & u);
    let set: Vec<i64> = block::support(acc, l).map(|p| p as i64 - radius as i64).collect();
    let canonical = set.iter().copied().min_by_key(|&t| (t.unsigned_abs(), t < 0));
    Witness {
        set,
        all_zero_code: ones.is_empty(),
        canonical,
    }
}

/// Offsets `t` with τ(x) <= S^t x for every x whose windows lie in the domain.
pub fn monotone_witness(c: &Code) -> Witness {
    witness_of(c.radius, &c.ones())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotoneVerdict {
    /// φ(B) <= B(0) for every domain block.
    pub monotone: bool,
    pub witness: Witness,
    /// Compose with `shift(-t)` to obtain a monotone code.
    pub normalization: Option<i64>,
}

pub fn is_monotone(c: &Code) -> MonotoneVerdict {
    let witness = monotone_witness(c);
    MonotoneVerdict {
        monotone: witness.set.contains(&0),
        normalization: witness.canonical,
        witness,
    }
}
