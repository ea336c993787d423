//! Admissible words built from shifted copies of a block, and the CRT
//! configuration showing that a code without monotone witness cannot map
//! X_B into itself.
//!
//! Positions are `BigInt`: the moduli products grow past `i128` already at
//! radius 2.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{self, serialize_bigint, serialize_bigints};
use crate::bset::BSet;
use crate::codes::{witness_of, Code};
use crate::error::{Error, Result};
use crate::sieve::{block, is_admissible, Word};

fn residue(x: &BigInt, b: u64) -> u64 {
    x.mod_floor(&BigInt::from(b)).to_u64().expect("residue below modulus")
}

fn residues<'a>(support: impl IntoIterator<Item = &'a BigInt>, b: u64) -> BTreeSet<u64> {
    support.into_iter().map(|x| residue(x, b)).collect()
}

/// First modulus of `B` whose classes are all met by `support`, if any.
pub fn inadmissible_modulus(support: &[BigInt], b: &BSet) -> Result<Option<u64>> {
    for m in b.enumerate_exact(support.len() as u64)? {
        if residues(support, m).len() as u64 == m {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Smallest element of `B` strictly above `x`; `None` when `B` is finite and
/// has none.
fn element_above(b: &BSet, x: u64) -> Result<Option<u64>> {
    let mut bound = x.saturating_mul(2).saturating_add(64);
    loop {
        if let Some(&e) = b.enumerate(bound).iter().find(|&&e| e > x) {
            return Ok(Some(e));
        }
        if bound >= b.enumeration_bound() {
            return if b.is_infinite_kind() {
                Err(Error::EnumerationTooShallow(format!(
                    "no element above {x} within the enumeration bound {}",
                    b.enumeration_bound()
                )))
            } else {
                Ok(None)
            };
        }
        bound = bound.saturating_mul(4).min(b.enumeration_bound());
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftedCopiesChecks {
    /// Every `m` carries a copy of `u` on `m+1..m+|u|`.
    pub copies: bool,
    /// `M mod b0 = {0..b0-1} \ (-supp u)`.
    pub m_residues: bool,
    /// `supp(w_u) mod b0 = {1..b0-1}`.
    pub support_residues: bool,
    pub admissible: bool,
}

impl ShiftedCopiesChecks {
    pub fn all(&self) -> bool {
        self.copies && self.m_residues && self.support_residues && self.admissible
    }
}

/// The word `w_u` on positions `1..=length`.
#[derive(Debug, Clone, Serialize)]
pub struct ShiftedCopiesResult {
    pub u: String,
    /// supp(u) with `u` read on positions `1..=|u|`.
    pub u_support: Vec<u64>,
    pub b0: u64,
    pub n_u: usize,
    pub l: u64,
    /// Elements of `B \ {b0}` up to `L`.
    pub p_factors: Vec<u64>,
    #[serde(serialize_with = "serialize_bigint")]
    pub p: BigInt,
    #[serde(serialize_with = "serialize_bigints")]
    pub m: Vec<BigInt>,
    #[serde(serialize_with = "serialize_bigints")]
    pub support: Vec<BigInt>,
    #[serde(serialize_with = "serialize_bigint")]
    pub length: BigInt,
    pub m_residues: Vec<u64>,
    pub support_residues: Vec<u64>,
    pub checks: ShiftedCopiesChecks,
}

impl ShiftedCopiesResult {
    /// `w_u` as a word at offset 1, when positions fit in `i64`.
    pub fn to_word(&self) -> Option<Word> {
        let len = self.length.to_u64()?;
        let support: Option<Vec<i64>> = self.support.iter().map(|x| x.to_i64()).collect();
        Word::from_support(1, len, support?).ok()
    }

    fn verify(&mut self, u_len: u64, b: &BSet) -> Result<()> {
        let set: BTreeSet<&BigInt> = self.support.iter().collect();
        let u_set: BTreeSet<u64> = self.u_support.iter().copied().collect();
        self.checks.copies = self.m.iter().all(|m| {
            (1..=u_len).all(|j| set.contains(&(m + BigInt::from(j))) == u_set.contains(&j))
        });
        let b0 = self.b0;
        let expected_m: BTreeSet<u64> = (0..b0)
            .filter(|r| !u_set.iter().any(|&s| (r + s) % b0 == 0))
            .collect();
        self.checks.m_residues = residues(&self.m, b0) == expected_m && self.m.len() as u64 == b0 - self.n_u as u64;
        self.checks.support_residues = residues(&self.support, b0) == (1..b0).collect::<BTreeSet<_>>();
        self.checks.admissible = inadmissible_modulus(&self.support, b)?.is_none();
        if self.checks.all() {
            Ok(())
        } else {
            Err(Error::PostconditionFailed(format!(
                "shifted copies of {} with b0 = {b0}: {:?}",
                self.u, self.checks
            )))
        }
    }
}

impl fmt::Display for ShiftedCopiesResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(BigInt::to_string).collect::<Vec<_>>().join(",");
        let joinu = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        writeln!(f, "u = {} (N_u = {}), b0 = {}", self.u, self.n_u, self.b0)?;
        writeln!(f, "L = {}, P = {} = prod{{{}}}", self.l, self.p, joinu(&self.p_factors))?;
        writeln!(f, "M = {{{}}}", join(&self.m))?;
        writeln!(f, "supp(w_u) = {{{}}}", join(&self.support))?;
        write!(f, "supp(w_u) mod {} = {{{}}}", self.b0, joinu(&self.support_residues))
    }
}

/// Admissible word made of `b0 - N_u` copies of `u` whose start positions
/// `m ∈ {nP}` avoid `-supp(u)` modulo `b0`. Positions of `u` are read as
/// `1..=|u|` regardless of its offset.
pub fn shifted_copies(u: &Word, b0: u64, b: &BSet) -> Result<ShiftedCopiesResult> {
    let u_len = u.len();
    let u_support: Vec<u64> = u.support().iter().map(|&s| (s - u.offset() + 1) as u64).collect();
    if u_support.is_empty() {
        return Err(Error::MalformedSpec("u must have nonempty support".into()));
    }
    if !b.contains(b0) {
        return Err(Error::PreconditionB0(format!("{b0} is not an element of {b}")));
    }
    if b0 <= 2 * u_len {
        return Err(Error::PreconditionB0(format!("b0 = {b0} must exceed 2|u| = {}", 2 * u_len)));
    }
    if !is_admissible(u, b) {
        return Err(Error::NotAdmissible(u.to_string()));
    }
    let n_u = u_support.len() as u64;
    let floor = n_u * (b0 - n_u);

    // smallest L whose product of elements of B \ {b0} exceeds |u|
    let mut search = floor.max(64);
    let needed = loop {
        let mut prod = BigInt::one();
        let hit = b.enumerate(search).into_iter().filter(|&e| e != b0).find(|&e| {
            prod *= e;
            prod > BigInt::from(u_len)
        });
        if let Some(e) = hit {
            break e;
        }
        if search >= b.enumeration_bound() {
            return Err(Error::InsufficientModuli(format!(
                "elements of {b} other than {b0} never multiply past |u| = {u_len}"
            )));
        }
        search = search.saturating_mul(4).min(b.enumeration_bound());
    };
    let l = floor.max(needed);
    let p_factors: Vec<u64> = b.enumerate_exact(l)?.into_iter().filter(|&e| e != b0).collect();
    let p: BigInt = p_factors.iter().map(|&e| BigInt::from(e)).product();
    if !p.gcd(&BigInt::from(b0)).is_one() {
        return Err(Error::CoprimalityFailure(format!("P = {p} shares a factor with b0 = {b0}")));
    }

    let forbidden: BTreeSet<u64> = u_support.iter().map(|&s| (b0 - s % b0) % b0).collect();
    let m: Vec<BigInt> = (0..b0)
        .map(|n| &p * n)
        .filter(|m| !forbidden.contains(&residue(m, b0)))
        .collect();
    let support: BTreeSet<BigInt> = m
        .iter()
        .flat_map(|m| u_support.iter().map(move |&s| m + s))
        .collect();
    let support: Vec<BigInt> = support.into_iter().collect();
    let length = m.last().cloned().unwrap_or_default() + u_len;

    let mut result = ShiftedCopiesResult {
        u: u.to_string(),
        m_residues: residues(&m, b0).into_iter().collect(),
        support_residues: residues(&support, b0).into_iter().collect(),
        u_support,
        b0,
        n_u: n_u as usize,
        l,
        p_factors,
        p,
        m,
        support,
        length,
        checks: ShiftedCopiesChecks {
            copies: false,
            m_residues: false,
            support_residues: false,
            admissible: false,
        },
    };
    result.verify(u_len, b)?;
    Ok(result)
}

/// One `w_u` inside the counterexample configuration.
#[derive(Debug, Clone, Serialize)]
pub struct Placement {
    pub u: String,
    /// J_u as offsets in `-ℓ..=ℓ`.
    pub j_u: Vec<i64>,
    pub w_u: ShiftedCopiesResult,
    /// The missed residue r_{u,i} for each modulus b_0..b_K.
    pub missed: Vec<u64>,
    #[serde(serialize_with = "serialize_bigint")]
    pub s_u: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub k_u: BigInt,
    /// Position of `w_u(1)` in x, i.e. `k_u·Q + s_u + 1`.
    #[serde(serialize_with = "serialize_bigint")]
    pub start: BigInt,
    /// `{0..b0-1} \ (-J_u)`.
    pub expected_residues: Vec<u64>,
    /// Residues mod b0 of the image's 1s near this placement.
    pub observed_residues: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleResult {
    pub code: String,
    pub radius: usize,
    pub b0: u64,
    /// b_0, b_1, ..., b_K.
    pub moduli: Vec<u64>,
    pub k: usize,
    /// `max(|U|·(b0-(2ℓ+1))·(2ℓ+1), b0)`; every further element exceeds it.
    pub bound: u64,
    pub next_modulus: Option<u64>,
    #[serde(serialize_with = "serialize_bigint")]
    pub product: BigInt,
    /// 1-blocks of the code that are B-admissible.
    pub u_admissible: Vec<String>,
    pub placements: Vec<Placement>,
    #[serde(serialize_with = "serialize_bigints")]
    pub x_support: Vec<BigInt>,
    #[serde(serialize_with = "serialize_bigints")]
    pub image_support: Vec<BigInt>,
    pub image_residues: Vec<u64>,
    pub covers_all_residues: bool,
    pub x_admissible: bool,
    /// φ(0…0) = 1: then x = 0^Z already has image 1^Z.
    pub zero_block_maps_to_one: bool,
}

impl CounterexampleResult {
    /// x as a finite word, when every position fits in `i64`.
    pub fn to_word(&self) -> Option<Word> {
        let support: Option<Vec<i64>> = self.x_support.iter().map(|x| x.to_i64()).collect();
        Some(Word::from_finite_support(support?))
    }
}

impl fmt::Display for CounterexampleResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "code {} (radius {}), b0 = {}", self.code, self.radius, self.b0)?;
        if self.zero_block_maps_to_one {
            return write!(f, "φ(0…0) = 1: x = 0^Z is admissible and τ(x) = 1^Z is not");
        }
        writeln!(f, "moduli b_0..b_K = {:?} (K = {}), next {:?}", self.moduli, self.k, self.next_modulus)?;
        for p in &self.placements {
            writeln!(
                f,
                "  u = {} J_u = {:?}: s_u = {}, k_u = {}, image residues {:?}",
                p.u, p.j_u, p.s_u, p.k_u, p.observed_residues
            )?;
        }
        write!(
            f,
            "|supp x| = {}, x admissible: {}, image covers all residues mod {}: {}",
            self.x_support.len(),
            self.x_admissible,
            self.b0,
            self.covers_all_residues
        )
    }
}

/// Image support of a finite configuration with big positions; φ(0…0) must be 0.
fn image_support(c: &Code, x: &BTreeSet<BigInt>) -> Result<Vec<BigInt>> {
    let r = c.radius() as i64;
    let l = c.window();
    let mut centers = BTreeSet::new();
    for s in x {
        for d in -r..=r {
            centers.insert(s + d);
        }
    }
    let mut out = Vec::new();
    for center in centers {
        let lo = &center - r;
        let v = x
            .range(lo.clone()..=&center + r)
            .fold(0u64, |v, s| v | 1 << (l - 1 - (s - &lo).to_usize().unwrap()));
        if c.phi(v)? {
            out.push(center);
        }
    }
    Ok(out)
}

/// Concrete admissible x whose image meets every class modulo b0, for a code
/// whose admissible 1-blocks have no common support position.
pub fn crt_counterexample(c: &Code, b: &BSet) -> Result<CounterexampleResult> {
    let radius = c.radius();
    let l = c.window() as u64;
    let u_adm: Vec<u64> = c
        .ones()
        .into_iter()
        .filter(|&u| is_admissible(&Word::from_block(u, l as usize, 0), b))
        .collect();
    let witness = witness_of(radius, &u_adm);
    if u_adm.is_empty() || !witness.set.is_empty() {
        return Err(Error::WitnessExists(witness.set));
    }
    let b0 = element_above(b, 4 * radius as u64 + 2)?.ok_or_else(|| {
        Error::EnumerationTooShallow(format!("{b} has no element above {}", 4 * radius + 2))
    })?;
    let mut result = CounterexampleResult {
        code: c.name().to_string(),
        radius,
        b0,
        moduli: vec![b0],
        k: 0,
        bound: b0,
        next_modulus: None,
        product: BigInt::from(b0),
        u_admissible: u_adm.iter().map(|&u| block::to_string(u, l as usize)).collect(),
        placements: Vec::new(),
        x_support: Vec::new(),
        image_support: Vec::new(),
        image_residues: (0..b0).collect(),
        covers_all_residues: true,
        x_admissible: true,
        zero_block_maps_to_one: false,
    };
    if u_adm.contains(&0) {
        result.zero_block_maps_to_one = true;
        return Ok(result);
    }

    let bound = (u_adm.len() as u64 * (b0 - l) * l).max(b0);
    let rest: Vec<u64> = b
        .enumerate_exact(bound)
        .map_err(|_| Error::EnumerationTooShallow(format!("moduli up to {bound} are not enumerable in {b}")))?
        .into_iter()
        .filter(|&e| e != b0)
        .collect();
    let next = element_above(b, bound)?
        .ok_or_else(|| Error::EnumerationTooShallow(format!("no element of {b} above {bound}")))?;
    let mut moduli = vec![b0];
    moduli.extend(rest);
    let q: BigInt = moduli.iter().map(|&m| BigInt::from(m)).product();
    result.k = moduli.len() - 1;
    result.bound = bound;
    result.next_modulus = Some(next);
    result.product = q.clone();
    result.moduli = moduli.clone();

    let mut x = BTreeSet::new();
    let mut prev_last: Option<BigInt> = None;
    for &u in &u_adm {
        let w_u = shifted_copies(&Word::from_block(u, l as usize, 0), b0, b)?;
        let mut missed = Vec::with_capacity(moduli.len());
        for &m in &moduli {
            let seen = residues(&w_u.support, m);
            let r = (0..m)
                .find(|r| !seen.contains(r))
                .ok_or_else(|| Error::NotAdmissible(format!("w_u for {} meets every class mod {m}", w_u.u)))?;
            missed.push(r);
        }
        let targets: Vec<u64> = missed.iter().zip(&moduli).map(|(&r, &m)| (m - r) % m).collect();
        let (s_u, _) = arith::crt(&targets, &moduli)
            .ok_or_else(|| Error::CoprimalityFailure(format!("moduli {moduli:?} are not pairwise coprime")))?;
        let k_u = match &prev_last {
            None => BigInt::zero(),
            Some(last) => {
                let need = last + b0 - &s_u;
                if need.is_positive() {
                    need.div_ceil(&q)
                } else {
                    BigInt::zero()
                }
            }
        };
        let start = &k_u * &q + &s_u + 1;
        for p in &w_u.support {
            x.insert(&start - 1 + p);
        }
        prev_last = Some(&start - 1 + &w_u.length);
        let j_u: Vec<i64> = block::support(u, l as usize).map(|p| p as i64 - radius as i64).collect();
        let expected: Vec<u64> = (0..b0)
            .filter(|r| !j_u.iter().any(|&j| (*r as i64 + j).rem_euclid(b0 as i64) == 0))
            .collect();
        result.placements.push(Placement {
            u: block::to_string(u, l as usize),
            j_u,
            w_u,
            missed,
            s_u,
            k_u,
            start,
            expected_residues: expected,
            observed_residues: Vec::new(),
        });
    }

    let image = image_support(c, &x)?;
    for p in &mut result.placements {
        let lo = &p.start - radius as i64;
        let hi = &p.start + &p.w_u.length + radius as i64;
        p.observed_residues = residues(image.iter().filter(|&y| *y >= lo && *y <= hi), b0)
            .into_iter()
            .collect();
    }
    result.x_support = x.into_iter().collect();
    result.image_residues = residues(&image, b0).into_iter().collect();
    result.image_support = image;
    result.covers_all_residues = result.image_residues.len() as u64 == b0;
    result.x_admissible = inadmissible_modulus(&result.x_support, b)?.is_none();
    if !result.x_admissible || !result.covers_all_residues {
        return Err(Error::PostconditionFailed(format!(
            "counterexample for {}: x admissible {}, image residues {:?}",
            c.name(),
            result.x_admissible,
            result.image_residues
        )));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn worked_example() {
        let r = shifted_copies(&"1".parse().unwrap(), 4, &BSet::prime_squares()).unwrap();
        assert_eq!((r.l, r.p.clone()), (9, BigInt::from(9)));
        assert_eq!(r.m, big(&[0, 9, 18]));
        assert_eq!(r.support, big(&[1, 10, 19]));
        assert_eq!(r.support_residues, vec![1, 2, 3]);
        assert!(r.checks.all());
        assert_eq!(r.to_word().unwrap().to_string(), "1000000001000000001@1");
    }

    #[test]
    fn full_support_block() {
        let r = shifted_copies(&"111".parse().unwrap(), 9, &BSet::prime_squares()).unwrap();
        // M mod 9 misses -{1,2,3} = {8,7,6}
        assert_eq!(r.m_residues, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(r.support.len(), 6 * 3);
    }

    #[test]
    fn preconditions() {
        let b = BSet::prime_squares();
        assert!(matches!(shifted_copies(&"1".parse().unwrap(), 2, &b), Err(Error::PreconditionB0(_))));
        assert!(matches!(shifted_copies(&"1".parse().unwrap(), 5, &b), Err(Error::PreconditionB0(_))));
        assert!(matches!(
            shifted_copies(&"1111".parse().unwrap(), 25, &b),
            Err(Error::NotAdmissible(_))
        ));
        let small = BSet::explicit([4, 9]).unwrap();
        assert!(matches!(
            shifted_copies(&"1".parse().unwrap(), 9, &BSet::explicit([9]).unwrap()),
            Err(Error::InsufficientModuli(_))
        ));
        assert!(shifted_copies(&"1111".parse().unwrap(), 9, &BSet::explicit([9, 25]).unwrap()).is_ok());
        assert!(shifted_copies(&"1".parse().unwrap(), 9, &small).is_ok());
        let shared = BSet::explicit([4, 6]).unwrap();
        assert!(matches!(
            shifted_copies(&"1".parse().unwrap(), 6, &shared),
            Err(Error::CoprimalityFailure(_))
        ));
    }

    #[test]
    fn counterexample_for_empty_witness() {
        let c = Code::from_ones(1, [0b110, 0b011, 0b101]).unwrap();
        let r = crt_counterexample(&c, &BSet::prime_squares()).unwrap();
        assert_eq!(r.b0, 9);
        assert_eq!(r.moduli, vec![9, 4, 25, 49]);
        assert_eq!(r.k, 3);
        assert!(r.x_admissible && r.covers_all_residues);
        assert_eq!(r.placements.len(), 3);
        let x = r.to_word().unwrap();
        let img = crate::codes::apply_to_finite_config(&c, &x).unwrap();
        let classes: BTreeSet<i64> = img.support().iter().map(|s| s.rem_euclid(9)).collect();
        assert_eq!(classes.len(), 9);
    }

    #[test]
    fn counterexample_errors() {
        assert!(matches!(
            crt_counterexample(&Code::identity(), &BSet::prime_squares()),
            Err(Error::WitnessExists(w)) if w == vec![0]
        ));
        let c = Code::from_ones(1, [0b110, 0b011, 0b101]).unwrap();
        assert!(matches!(
            crt_counterexample(&c, &BSet::explicit([4, 9]).unwrap()),
            Err(Error::EnumerationTooShallow(_))
        ));
        let neg = crt_counterexample(&Code::negation(), &BSet::prime_squares()).unwrap();
        assert!(neg.zero_block_maps_to_one);
    }
}
