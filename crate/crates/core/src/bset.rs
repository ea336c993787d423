//! Sets `B` of moduli: parsing, classification, and densities of the
//! associated B-free integers.
//!
//! An infinite `B` is only ever handled through exact bounded enumeration.
//! Every verdict computed here is therefore a statement about a finite
//! truncation `B_K`, and the reports say so.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{self, format_rational, lcm_big, lcm_checked, unit_fraction};
use crate::caps::Caps;
use crate::error::{Error, Result};

const DEFAULT_ENUMERATION_BOUND: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BSetKind {
    /// A finite, explicitly listed set (sorted, distinct, all `>= 2`).
    Explicit(Vec<u64>),
    /// `{ p^k : p prime, p <= prime_bound }`; no prime bound means infinite.
    PrimePowers { k: u32, prime_bound: Option<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BSet {
    kind: BSetKind,
    /// Largest integer up to which membership is decided exactly.
    enumeration_bound: u64,
}

impl BSet {
    pub fn explicit(elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut v: Vec<u64> = elements.into_iter().collect();
        if v.contains(&1) {
            return Err(Error::ContainsOne);
        }
        if v.contains(&0) {
            return Err(Error::MalformedSpec("0 is not a valid modulus".into()));
        }
        v.sort_unstable();
        v.dedup();
        Ok(BSet {
            kind: BSetKind::Explicit(v),
            enumeration_bound: u64::MAX,
        })
    }

    pub fn prime_powers(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::ContainsOne);
        }
        Ok(BSet {
            kind: BSetKind::PrimePowers { k, prime_bound: None },
            enumeration_bound: DEFAULT_ENUMERATION_BOUND,
        })
    }

    pub fn prime_squares() -> Self {
        Self::prime_powers(2).expect("k = 2 is valid")
    }

    pub fn with_prime_bound(mut self, bound: u64) -> Self {
        if let BSetKind::PrimePowers { prime_bound, .. } = &mut self.kind {
            *prime_bound = Some(bound);
        }
        self
    }

    pub fn with_enumeration_bound(mut self, bound: u64) -> Self {
        if matches!(self.kind, BSetKind::PrimePowers { .. }) {
            self.enumeration_bound = bound;
        }
        self
    }

    pub fn kind(&self) -> &BSetKind {
        &self.kind
    }

    pub fn enumeration_bound(&self) -> u64 {
        self.enumeration_bound
    }

    /// True if `B` is infinite as a mathematical object (not its enumeration).
    pub fn is_infinite_kind(&self) -> bool {
        matches!(self.kind, BSetKind::PrimePowers { prime_bound: None, .. })
    }

    /// `{ b ∈ B : b <= bound }`, sorted. Elements above the enumeration bound
    /// are never reported.
    pub fn enumerate(&self, bound: u64) -> Vec<u64> {
        let bound = bound.min(self.enumeration_bound);
        match &self.kind {
            BSetKind::Explicit(v) => v.iter().copied().take_while(|&b| b <= bound).collect(),
            BSetKind::PrimePowers { k, prime_bound } => {
                let mut r = arith::integer_root(bound, *k);
                if let Some(p) = prime_bound {
                    r = r.min(*p);
                }
                arith::primes_up_to(r)
                    .into_iter()
                    .map(|p| p.pow(*k))
                    .collect()
            }
        }
    }

    /// Like [`enumerate`](Self::enumerate) but refuses to silently truncate.
    pub fn enumerate_exact(&self, bound: u64) -> Result<Vec<u64>> {
        if bound > self.enumeration_bound {
            return Err(Error::BeyondEnumerationBound {
                requested: bound,
                bound: self.enumeration_bound,
            });
        }
        Ok(self.enumerate(bound))
    }

    /// The `count` smallest elements (fewer if `B` is finite and smaller).
    pub fn first(&self, count: usize) -> Result<Vec<u64>> {
        match &self.kind {
            BSetKind::Explicit(v) => Ok(v.iter().copied().take(count).collect()),
            BSetKind::PrimePowers { k, prime_bound } => {
                let top = prime_bound.map(|p| p.checked_pow(*k).unwrap_or(u64::MAX));
                let mut bound: u64 = 64.min(self.enumeration_bound);
                loop {
                    let v = self.enumerate(bound);
                    if v.len() >= count {
                        return Ok(v.into_iter().take(count).collect());
                    }
                    if top.is_some_and(|t| bound >= t) {
                        return Ok(v);
                    }
                    if bound >= self.enumeration_bound {
                        return Err(Error::BeyondEnumerationBound {
                            requested: bound.saturating_add(1),
                            bound: self.enumeration_bound,
                        });
                    }
                    bound = bound.saturating_mul(4).min(self.enumeration_bound);
                }
            }
        }
    }

    pub fn contains(&self, b: u64) -> bool {
        self.enumerate(b).last() == Some(&b)
    }

    /// Parse either the inline form (`explicit:2,3`, `prime_powers:k=2`) or
    /// the line-oriented `key=value` form used by B-set files.
    pub fn parse(spec: &str) -> Result<Self> {
        let trimmed = spec.trim();
        let is_file_form = trimmed
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .is_some_and(|l| l.starts_with("kind"));
        if is_file_form {
            parse_key_value(trimmed)
        } else {
            parse_inline(trimmed)
        }
    }
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedSpec(msg.into())
}

fn parse_u64(key: &str, v: &str) -> Result<u64> {
    let v = v.trim().replace('_', "");
    if let Some((base, exp)) = v.split_once('^') {
        let base: u64 = base.parse().map_err(|_| malformed(format!("{key}: bad integer {v:?}")))?;
        let exp: u32 = exp.parse().map_err(|_| malformed(format!("{key}: bad exponent {v:?}")))?;
        return base
            .checked_pow(exp)
            .ok_or_else(|| malformed(format!("{key}: {v} overflows")));
    }
    v.parse()
        .map_err(|_| malformed(format!("{key}: bad integer {v:?}")))
}

fn parse_elements(list: &str) -> Result<Vec<u64>> {
    list.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_u64("elements", s))
        .collect()
}

fn build(kind: &str, elements: Option<Vec<u64>>, params: &[(String, String)]) -> Result<BSet> {
    let lookup = |names: &[&str]| {
        params
            .iter()
            .find(|(k, _)| names.contains(&k.as_str()))
            .map(|(_, v)| v.clone())
    };
    match kind {
        "explicit" => {
            let elements = elements.ok_or_else(|| malformed("explicit set needs elements"))?;
            if elements.is_empty() {
                return Err(malformed("explicit set needs at least one element"));
            }
            BSet::explicit(elements)
        }
        "prime_powers" | "prime-powers" => {
            let k = lookup(&["k"]).ok_or_else(|| malformed("prime_powers needs k"))?;
            let k: u32 = parse_u64("k", &k)?
                .try_into()
                .map_err(|_| malformed("k too large"))?;
            let mut b = BSet::prime_powers(k)?;
            if let Some(p) = lookup(&["prime_bound", "p"]) {
                b = b.with_prime_bound(parse_u64("prime_bound", &p)?);
            }
            if let Some(e) = lookup(&["enumeration_bound", "bound"]) {
                b = b.with_enumeration_bound(parse_u64("enumeration_bound", &e)?);
            }
            Ok(b)
        }
        other => Err(malformed(format!("unknown kind {other:?}"))),
    }
}

fn parse_inline(spec: &str) -> Result<BSet> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| malformed(format!("expected `kind: parameters`, got {spec:?}")))?;
    let kind = kind.trim().to_ascii_lowercase();
    if kind == "explicit" {
        return build(&kind, Some(parse_elements(rest)?), &[]);
    }
    let params = rest
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_ascii_lowercase(), v.trim().to_string()))
                .ok_or_else(|| malformed(format!("expected key=value, got {kv:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    build(&kind, None, &params)
}

fn parse_key_value(spec: &str) -> Result<BSet> {
    let mut kind = None;
    let mut elements = None;
    let mut params = Vec::new();
    for line in spec.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| malformed(format!("expected key=value, got {line:?}")))?;
        let k = k.trim().to_ascii_lowercase();
        match k.as_str() {
            "kind" => kind = Some(v.trim().to_ascii_lowercase()),
            "elements" => elements = Some(parse_elements(v)?),
            _ => params.push((k, v.trim().to_string())),
        }
    }
    let kind = kind.ok_or_else(|| malformed("missing kind"))?;
    build(&kind, elements, &params)
}

impl FromStr for BSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BSet::parse(s)
    }
}

impl fmt::Display for BSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BSetKind::Explicit(v) => {
                let items: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "explicit:{}", items.join(","))
            }
            BSetKind::PrimePowers { k, prime_bound } => {
                write!(f, "prime_powers:k={k}")?;
                if let Some(p) = prime_bound {
                    write!(f, ",prime_bound={p}")?;
                }
                Ok(())
            }
        }
    }
}

/// Remove every enumerated element that has a proper divisor among the
/// enumerated elements. The result is an explicit set restricted to `[2, bound]`.
pub fn primitivize(b: &BSet, bound: u64) -> BSet {
    if matches!(b.kind, BSetKind::PrimePowers { .. }) {
        // p^k never divides q^k for distinct primes
        return b.clone();
    }
    let elems = b.enumerate(bound);
    BSet {
        kind: BSetKind::Explicit(primitive_part(&elems)),
        enumeration_bound: u64::MAX,
    }
}

pub(crate) fn primitive_part(sorted: &[u64]) -> Vec<u64> {
    let mut kept: Vec<u64> = Vec::new();
    for &x in sorted {
        if !kept.iter().any(|&k| x % k == 0) {
            kept.push(x);
        }
    }
    kept
}

fn divisibility_witness(sorted: &[u64]) -> Option<(u64, u64)> {
    let &max = sorted.last()?;
    let present: HashSet<u64> = sorted.iter().copied().collect();
    for &b in sorted {
        let mut m = b.checked_mul(2)?;
        while m <= max {
            if present.contains(&m) {
                return Some((b, m));
            }
            m = match m.checked_add(b) {
                Some(m) => m,
                None => break,
            };
        }
    }
    None
}

fn coprimality_witness(sorted: &[u64]) -> Option<(u64, u64)> {
    for (i, &a) in sorted.iter().enumerate() {
        for &b in &sorted[i + 1..] {
            if arith::gcd(a, b) > 1 {
                return Some((a, b));
            }
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub bset: String,
    pub bound: u64,
    pub enumerated_count: usize,
    pub primitive: bool,
    pub divisibility_witness: Option<(u64, u64)>,
    pub pairwise_coprime: bool,
    pub coprimality_witness: Option<(u64, u64)>,
    #[serde(serialize_with = "arith::serialize_rational")]
    pub thin_partial_sum: BigRational,
    pub contains_one: bool,
    pub infinite_kind: bool,
    pub thin_tail: bool,
    pub erdos_candidate: bool,
    pub notes: Vec<String>,
}

pub fn classify(b: &BSet, bound: u64) -> ClassificationReport {
    let elems = b.enumerate(bound);
    let divisibility = divisibility_witness(&elems);
    let coprime = match b.kind {
        BSetKind::PrimePowers { .. } => None,
        BSetKind::Explicit(_) => coprimality_witness(&elems),
    };
    let thin_partial_sum = elems
        .iter()
        .fold(BigRational::zero(), |acc, &x| acc + unit_fraction(x));
    let (infinite_kind, thin_tail) = match b.kind {
        BSetKind::Explicit(_) => (false, true),
        BSetKind::PrimePowers { k, prime_bound } => (prime_bound.is_none(), k >= 2 || prime_bound.is_some()),
    };
    let primitive = divisibility.is_none();
    let pairwise_coprime = coprime.is_none();
    let erdos_candidate = primitive && infinite_kind && pairwise_coprime && thin_tail;

    let mut notes = vec![format!(
        "primitivity and coprimality verified on the {} elements <= {}",
        elems.len(),
        bound.min(b.enumeration_bound())
    )];
    match b.kind {
        BSetKind::Explicit(_) => notes.push("explicit sets are finite and never Erdős".into()),
        BSetKind::PrimePowers { k, prime_bound: None } if k >= 2 => notes.push(format!(
            "thin tail: sum over p > x of 1/p^{k} <= 1/({}·x^{})",
            k - 1,
            k - 1
        )),
        BSetKind::PrimePowers { k: 1, prime_bound: None } => {
            notes.push("primes: sum of 1/p diverges, not thin".into())
        }
        _ => {}
    }
    if !primitive {
        notes.push("not primitive; see primitivize".into());
    }
    ClassificationReport {
        bset: b.to_string(),
        bound,
        enumerated_count: elems.len(),
        primitive,
        divisibility_witness: divisibility,
        pairwise_coprime,
        coprimality_witness: coprime,
        thin_partial_sum,
        contains_one: false,
        infinite_kind,
        thin_tail,
        erdos_candidate,
        notes,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMethod {
    InclusionExclusion,
    PeriodSieve,
}

impl FromStr for DensityMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ie" | "inclusion_exclusion" | "inclusion-exclusion" => Ok(Self::InclusionExclusion),
            "sieve" | "period_sieve" | "period-sieve" => Ok(Self::PeriodSieve),
            _ => Err(malformed(format!("unknown density method {s:?}"))),
        }
    }
}

/// Exact density of the integers divisible by no element of `bk`.
pub fn density_exact(bk: &[u64], method: DensityMethod, caps: &Caps) -> Result<BigRational> {
    if let Some(&b) = bk.iter().find(|&&b| b < 2) {
        return if b == 1 {
            Err(Error::ContainsOne)
        } else {
            Err(malformed("0 is not a valid modulus"))
        };
    }
    match method {
        DensityMethod::InclusionExclusion => inclusion_exclusion(bk, caps),
        DensityMethod::PeriodSieve => period_sieve(bk, caps),
    }
}

fn inclusion_exclusion(bk: &[u64], caps: &Caps) -> Result<BigRational> {
    if bk.len() > caps.subsets {
        return Err(Error::SubsetBlowup {
            count: bk.len(),
            cap: caps.subsets,
        });
    }
    // Common denominator L = lcm(B_K): every term L/lcm(S) is an integer.
    match lcm_checked(bk) {
        Some(l) if l < (1u128 << 96) => {
            fn walk(bk: &[u64], l: u128, cur: u128, sign: i128, acc: &mut i128) {
                let Some((&b, rest)) = bk.split_first() else {
                    *acc += sign * (l / cur) as i128;
                    return;
                };
                walk(rest, l, cur, sign, acc);
                let g = num_integer::gcd(cur, b as u128);
                walk(rest, l, cur / g * b as u128, -sign, acc);
            }
            let mut acc = 0i128;
            walk(bk, l, 1, 1, &mut acc);
            Ok(BigRational::new(BigInt::from(acc), BigInt::from(l)))
        }
        _ => {
            fn walk(bk: &[u64], cur: &BigUint, sign: bool, acc: &mut BigRational) {
                let Some((&b, rest)) = bk.split_first() else {
                    let term = BigRational::new(BigInt::one(), BigInt::from(cur.clone()));
                    if sign {
                        *acc += term;
                    } else {
                        *acc -= term;
                    }
                    return;
                };
                walk(rest, cur, sign, acc);
                let next = num_integer::Integer::lcm(cur, &BigUint::from(b));
                walk(rest, &next, !sign, acc);
            }
            let mut acc = BigRational::zero();
            walk(bk, &BigUint::one(), true, &mut acc);
            Ok(acc)
        }
    }
}

/// Count free residues over one period with a word-level wheel. Elements are
/// first split into groups with pairwise coprime periods; by CRT the group
/// densities multiply, so only each group's own period is walked.
fn period_sieve(bk: &[u64], caps: &Caps) -> Result<BigRational> {
    let mut density = BigRational::one();
    for group in coprime_groups(bk) {
        let period = match lcm_checked(&group) {
            Some(l) if l <= caps.period as u128 => l as u64,
            Some(l) => {
                return Err(Error::PeriodTooLarge {
                    period: l.to_string(),
                    cap: caps.period,
                })
            }
            None => {
                return Err(Error::PeriodTooLarge {
                    period: lcm_big(&group).to_string(),
                    cap: caps.period,
                })
            }
        };
        let free = count_free_in_period(&group, period);
        density *= BigRational::new(BigInt::from(free), BigInt::from(period));
    }
    Ok(density)
}

/// Connected components of the "shares a prime factor" relation.
fn coprime_groups(bk: &[u64]) -> Vec<Vec<u64>> {
    let mut parent: Vec<usize> = (0..bk.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..bk.len() {
        for j in i + 1..bk.len() {
            if arith::gcd(bk[i], bk[j]) > 1 {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for (i, &b) in bk.iter().enumerate() {
        let r = root(&mut parent, i);
        groups.entry(r).or_default().push(b);
    }
    groups.into_values().collect()
}

pub(crate) fn count_free_in_period(bk: &[u64], period: u64) -> u64 {
    // pattern[b][w] marks multiples of b among 64w..64w+63; it repeats every b words
    let patterns: Vec<Vec<u64>> = bk
        .iter()
        .map(|&b| {
            (0..b)
                .map(|w| {
                    let mut mask = 0u64;
                    let base = (64 * w) % b;
                    let mut i = (b - base) % b;
                    while i < 64 {
                        mask |= 1 << i;
                        i += b;
                    }
                    mask
                })
                .collect()
        })
        .collect();
    let words = period.div_ceil(64);
    let mut cursor = vec![0usize; bk.len()];
    let mut free = 0u64;
    for w in 0..words {
        let mut hit = 0u64;
        for (c, pat) in cursor.iter_mut().zip(&patterns) {
            hit |= pat[*c];
            *c += 1;
            if *c == pat.len() {
                *c = 0;
            }
        }
        let valid = if w + 1 == words && !period.is_multiple_of(64) {
            (1u64 << (period % 64)) - 1
        } else {
            u64::MAX
        };
        free += (!hit & valid).count_ones() as u64;
    }
    free
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub bset: String,
    pub truncation: Vec<u64>,
    #[serde(serialize_with = "arith::serialize_rational")]
    pub exact_density: BigRational,
    #[serde(serialize_with = "arith::serialize_rational")]
    pub lower_bound: BigRational,
    #[serde(serialize_with = "arith::serialize_rational")]
    pub upper_bound: BigRational,
    #[serde(serialize_with = "arith::serialize_rational")]
    pub tail_bound: BigRational,
    pub tail_method: String,
    pub method: DensityMethod,
    pub notes: Vec<String>,
}

/// Bracket δ(F_B) between δ(F_{B_K}) minus the thin tail and δ(F_{B_K}).
///
/// For `p^k` with `k >= 2` the tail past the K-th prime `q` is bounded by
/// `Σ_{n>q} n^{-k} <= ∫_q^∞ t^{-k} dt = 1/((k-1) q^{k-1})`.
pub fn density_bounds(b: &BSet, k: usize, method: DensityMethod, caps: &Caps) -> Result<DensityReport> {
    let truncation = b.first(k)?;
    let exact = density_exact(&truncation, method, caps)?;
    let (tail, tail_method) = match b.kind() {
        BSetKind::Explicit(all) => {
            let rest = all[truncation.len()..]
                .iter()
                .fold(BigRational::zero(), |acc, &x| acc + unit_fraction(x));
            (rest, "exact sum over the omitted listed elements".to_string())
        }
        BSetKind::PrimePowers { k: e, prime_bound } => {
            let q = match truncation.last() {
                Some(&last) => arith::integer_root(last, *e),
                None => 1,
            };
            match prime_bound {
                Some(p) if *p <= 10_000_000 => {
                    let rest = arith::primes_up_to(*p)
                        .into_iter()
                        .filter(|&r| r > q)
                        .fold(BigRational::zero(), |acc, r| {
                            acc + BigRational::new(BigInt::one(), BigInt::from(r).pow(*e))
                        });
                    (rest, "exact sum over the remaining primes".to_string())
                }
                _ if *e >= 2 => {
                    let denom = BigInt::from(e - 1) * BigInt::from(q).pow(e - 1);
                    (
                        BigRational::new(BigInt::one(), denom),
                        format!("integral bound 1/(({e}-1)·{q}^{})", e - 1),
                    )
                }
                _ => {
                    return Err(Error::TailUnavailable(
                        "sum of 1/p diverges; B is not thin".into(),
                    ))
                }
            }
        }
    };
    let lower = arith::clamp_nonnegative(&exact - &tail);
    Ok(DensityReport {
        bset: b.to_string(),
        truncation,
        upper_bound: exact.clone(),
        lower_bound: lower,
        exact_density: exact,
        tail_bound: tail,
        tail_method,
        method,
        notes: vec![
            "the exact density is that of the truncation B_K; d = ν_η(1) for B_K".into(),
            "Behrend status is not asserted: a finite truncation always has positive density".into(),
        ],
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TautEntry {
    pub b: u64,
    #[serde(serialize_with = "arith::serialize_rational")]
    pub density_without: BigRational,
    pub strict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TautnessReport {
    pub truncation: Vec<u64>,
    #[serde(serialize_with = "arith::serialize_rational")]
    pub density: BigRational,
    pub entries: Vec<TautEntry>,
    pub all_strict: bool,
    pub note: String,
}

pub fn tautness_audit(bk: &[u64], method: DensityMethod, caps: &Caps) -> Result<TautnessReport> {
    let density = density_exact(bk, method, caps)?;
    let mut entries = Vec::with_capacity(bk.len());
    for (i, &b) in bk.iter().enumerate() {
        let rest: Vec<u64> = bk
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &x)| x)
            .collect();
        let without = density_exact(&rest, method, caps)?;
        entries.push(TautEntry {
            b,
            strict: without > density,
            density_without: without,
        });
    }
    Ok(TautnessReport {
        truncation: bk.to_vec(),
        all_strict: entries.iter().all(|e| e.strict),
        density,
        entries,
        note: "certifies tautness of the truncation only".into(),
    })
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", format_rational(&self.exact_density))?;
        write!(
            f,
            "bounds [{}, {}] tail {}",
            format_rational(&self.lower_bound),
            format_rational(&self.upper_bound),
            format_rational(&self.tail_bound)
        )
    }
}

impl DensityReport {
    pub fn lower_f64(&self) -> f64 {
        arith::rational_to_f64(&self.lower_bound)
    }
    pub fn upper_f64(&self) -> f64 {
        arith::rational_to_f64(&self.upper_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn parse_examples() {
        let b = BSet::parse("explicit: 2,3").unwrap();
        assert_eq!(b.enumerate(100), vec![2, 3]);
        let sq = BSet::parse("prime_powers: k=2").unwrap();
        assert_eq!(sq.enumerate(50), vec![4, 9, 25, 49]);
        assert_eq!(BSet::parse("explicit: 1,2"), Err(Error::ContainsOne));
        assert!(matches!(BSet::parse("nonsense"), Err(Error::MalformedSpec(_))));
        assert!(matches!(BSet::parse("explicit:"), Err(Error::MalformedSpec(_))));
    }

    #[test]
    fn parse_file_form() {
        let b = BSet::parse("# squares\nkind=prime_powers\nk=2\nenumeration_bound=10^6\n").unwrap();
        assert_eq!(b.enumeration_bound(), 1_000_000);
        assert_eq!(b.enumerate(30), vec![4, 9, 25]);
        let e = BSet::parse("kind=explicit\nelements=6, 10,15\n").unwrap();
        assert_eq!(e.enumerate(100), vec![6, 10, 15]);
        assert_eq!(BSet::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn primitivize_examples() {
        let b = BSet::explicit([2, 4, 3]).unwrap();
        assert_eq!(primitivize(&b, 100).enumerate(100), vec![2, 3]);
        let b = BSet::explicit([4, 9, 25]).unwrap();
        assert_eq!(primitivize(&b, 100).enumerate(100), vec![4, 9, 25]);
        let b = BSet::explicit([6, 10, 15, 30]).unwrap();
        assert_eq!(primitivize(&b, 100).enumerate(100), vec![6, 10, 15]);
    }

    #[test]
    fn classify_examples() {
        let r = classify(&BSet::explicit([2, 3]).unwrap(), 10);
        assert!(r.primitive && r.pairwise_coprime && !r.erdos_candidate);
        assert_eq!(r.thin_partial_sum, ratio(5, 6));

        let r = classify(&BSet::prime_squares(), 50);
        assert!(r.pairwise_coprime && r.primitive && r.erdos_candidate);
        let oracle = [4i64, 9, 25, 49]
            .iter()
            .fold(BigRational::zero(), |acc, &b| acc + ratio(1, b));
        assert_eq!(r.thin_partial_sum, oracle);

        let r = classify(&BSet::explicit([2, 4]).unwrap(), 10);
        assert!(!r.primitive);
        assert_eq!(r.divisibility_witness, Some((2, 4)));
    }

    #[test]
    fn density_examples_both_methods() {
        for m in [DensityMethod::InclusionExclusion, DensityMethod::PeriodSieve] {
            assert_eq!(density_exact(&[2, 3], m, &caps()).unwrap(), ratio(1, 3));
            assert_eq!(density_exact(&[2], m, &caps()).unwrap(), ratio(1, 2));
            assert_eq!(density_exact(&[4, 9], m, &caps()).unwrap(), ratio(2, 3));
            assert_eq!(density_exact(&[], m, &caps()).unwrap(), ratio(1, 1));
        }
    }

    #[test]
    fn density_caps() {
        let small = Caps {
            period: 10,
            subsets: 2,
            ..Caps::default()
        };
        assert!(matches!(
            density_exact(&[4, 6], DensityMethod::PeriodSieve, &small),
            Err(Error::PeriodTooLarge { .. })
        ));
        assert!(matches!(
            density_exact(&[2, 3, 5], DensityMethod::InclusionExclusion, &small),
            Err(Error::SubsetBlowup { .. })
        ));
    }

    #[test]
    fn density_bounds_examples() {
        let r = density_bounds(&BSet::explicit([2, 3]).unwrap(), 2, DensityMethod::PeriodSieve, &caps()).unwrap();
        assert_eq!(r.lower_bound, ratio(1, 3));
        assert_eq!(r.upper_bound, ratio(1, 3));

        let r = density_bounds(&BSet::prime_squares(), 0, DensityMethod::InclusionExclusion, &caps()).unwrap();
        assert_eq!(r.upper_bound, ratio(1, 1));
        assert_eq!(r.lower_bound, ratio(1, 1) - &r.tail_bound);

        assert!(matches!(
            density_bounds(&BSet::prime_powers(1).unwrap(), 3, DensityMethod::InclusionExclusion, &caps()),
            Err(Error::TailUnavailable(_))
        ));
    }

    #[test]
    fn tautness_examples() {
        let r = tautness_audit(&[2, 3], DensityMethod::InclusionExclusion, &caps()).unwrap();
        assert!(r.all_strict);
        assert_eq!(r.entries[0].density_without, ratio(2, 3));
        assert_eq!(r.entries[1].density_without, ratio(1, 2));
        assert!(tautness_audit(&[2], DensityMethod::PeriodSieve, &caps()).unwrap().all_strict);
        assert!(tautness_audit(&[4, 9, 25], DensityMethod::InclusionExclusion, &caps()).unwrap().all_strict);
        // 2 | 4: removing 4 changes nothing
        let r = tautness_audit(&[2, 4], DensityMethod::InclusionExclusion, &caps()).unwrap();
        assert!(!r.entries[1].strict);
    }

    #[test]
    fn first_elements() {
        assert_eq!(BSet::prime_squares().first(5).unwrap(), vec![4, 9, 25, 49, 121]);
        let finite = BSet::prime_squares().with_prime_bound(5);
        assert_eq!(finite.first(10).unwrap(), vec![4, 9, 25]);
        let shallow = BSet::prime_squares().with_enumeration_bound(30);
        assert!(shallow.first(4).is_err());
    }
}
