use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Longest block handled by the position-free `u64` encoding.
pub const MAX_BLOCK_LEN: usize = 63;

/// Position-free block helpers. A block of length `n` is stored as the
/// integer whose binary expansion (most significant bit first) is the block
/// string, so numeric order is lexicographic order.
pub mod block {
    use super::*;

    pub fn check_len(n: usize) -> Result<()> {
        if n == 0 || n > MAX_BLOCK_LEN {
            return Err(Error::BlockLength(n));
        }
        Ok(())
    }

    #[inline]
    pub fn bit(v: u64, n: usize, p: usize) -> bool {
        (v >> (n - 1 - p)) & 1 == 1
    }

    #[inline]
    pub fn mask(n: usize) -> u64 {
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    /// Positions `0..n` carrying a 1.
    pub fn support(v: u64, n: usize) -> impl Iterator<Item = usize> {
        (0..n).filter(move |&p| bit(v, n, p))
    }

    pub fn to_string(v: u64, n: usize) -> String {
        (0..n).map(|p| if bit(v, n, p) { '1' } else { '0' }).collect()
    }

    pub fn parse(s: &str) -> Result<(u64, usize)> {
        let s = s.trim();
        check_len(s.len())?;
        let mut v = 0u64;
        for c in s.chars() {
            v = (v << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::MalformedSpec(format!("bad block {s:?}"))),
                };
        }
        Ok((v, s.len()))
    }

    /// Sub-block of `len` symbols starting at position `start`.
    #[inline]
    pub fn slice(v: u64, n: usize, start: usize, len: usize) -> u64 {
        (v >> (n - start - len)) & mask(len)
    }
}

/// A finite 0/1 word anchored at an absolute offset.
///
/// The support is stored sparsely, so very long words with few ones (the
/// shifted-copies construction produces these) stay cheap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    offset: i64,
    len: u64,
    support: Vec<i64>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            offset: 0,
            len: 0,
            support: Vec::new(),
        }
    }

    pub fn zeros(offset: i64, len: u64) -> Self {
        Word {
            offset,
            len,
            support: Vec::new(),
        }
    }

    pub fn from_bits(offset: i64, bits: impl IntoIterator<Item = bool>) -> Self {
        let mut len = 0u64;
        let mut support = Vec::new();
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                support.push(offset + i as i64);
            }
            len = i as u64 + 1;
        }
        Word { offset, len, support }
    }

    /// Word covering `[offset, offset+len)` with ones exactly at `support`.
    pub fn from_support(offset: i64, len: u64, support: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut support: Vec<i64> = support.into_iter().collect();
        support.sort_unstable();
        support.dedup();
        let end = offset
            .checked_add(i64::try_from(len).map_err(|_| Error::Overflow)?)
            .ok_or(Error::Overflow)?;
        if support.first().is_some_and(|&s| s < offset) || support.last().is_some_and(|&s| s >= end) {
            return Err(Error::MalformedSpec(format!(
                "support leaves the window [{offset}, {end})"
            )));
        }
        Ok(Word { offset, len, support })
    }

    /// Smallest word containing the given support (empty word if none).
    pub fn from_finite_support(support: impl IntoIterator<Item = i64>) -> Self {
        let mut support: Vec<i64> = support.into_iter().collect();
        support.sort_unstable();
        support.dedup();
        match (support.first(), support.last()) {
            (Some(&a), Some(&z)) => Word {
                offset: a,
                len: (z - a) as u64 + 1,
                support,
            },
            _ => Word::empty(),
        }
    }

    pub fn from_block(v: u64, n: usize, offset: i64) -> Self {
        Word::from_bits(offset, (0..n).map(|p| block::bit(v, n, p)))
    }

    /// Position-free encoding; `None` for words longer than [`MAX_BLOCK_LEN`].
    pub fn to_block(&self) -> Option<u64> {
        if self.len as usize > MAX_BLOCK_LEN {
            return None;
        }
        let n = self.len as usize;
        Some(
            self.support
                .iter()
                .fold(0u64, |v, &s| v | 1 << (n - 1 - (s - self.offset) as usize)),
        )
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// One past the last covered position.
    pub fn end(&self) -> i64 {
        self.offset + self.len as i64
    }

    pub fn support(&self) -> &[i64] {
        &self.support
    }

    pub fn ones(&self) -> usize {
        self.support.len()
    }

    /// Bit at absolute position `n`; positions outside the word read as 0.
    pub fn bit(&self, n: i64) -> bool {
        self.support.binary_search(&n).is_ok()
    }

    pub fn bits(&self) -> Vec<bool> {
        let mut out = vec![false; self.len as usize];
        for &s in &self.support {
            out[(s - self.offset) as usize] = true;
        }
        out
    }

    /// The same pattern moved so that position `n` lands on `n + t`.
    pub fn translate(&self, t: i64) -> Word {
        Word {
            offset: self.offset + t,
            len: self.len,
            support: self.support.iter().map(|&s| s + t).collect(),
        }
    }

    /// Copy with the bit at absolute `n` set to `value`; `n` must be covered.
    pub fn with_bit(&self, n: i64, value: bool) -> Word {
        assert!(n >= self.offset && n < self.end(), "position {n} outside word");
        let mut w = self.clone();
        match (w.support.binary_search(&n), value) {
            (Err(i), true) => w.support.insert(i, n),
            (Ok(i), false) => {
                w.support.remove(i);
            }
            _ => {}
        }
        w
    }

    /// The window `[a, z]` (inclusive, absolute), zero outside this word.
    pub fn window(&self, a: i64, z: i64) -> Word {
        let lo = self.support.partition_point(|&s| s < a);
        let hi = self.support.partition_point(|&s| s <= z);
        Word {
            offset: a,
            len: (z - a + 1).max(0) as u64,
            support: self.support[lo..hi].to_vec(),
        }
    }

    /// Same support padded with `left`/`right` zeros.
    pub fn padded(&self, left: u64, right: u64) -> Word {
        Word {
            offset: self.offset - left as i64,
            len: self.len + left + right,
            support: self.support.clone(),
        }
    }

    /// Minimal word covering the support.
    pub fn trimmed(&self) -> Word {
        Word::from_finite_support(self.support.iter().copied())
    }

    /// Coordinatewise `self <= other` on the union of both windows.
    pub fn le(&self, other: &Word) -> bool {
        self.support.iter().all(|&s| other.bit(s))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::with_capacity(self.len as usize);
        let mut next = self.support.iter().peekable();
        for i in 0..self.len as i64 {
            let pos = self.offset + i;
            if next.peek() == Some(&&pos) {
                next.next();
                s.push('1');
            } else {
                s.push('0');
            }
        }
        write!(f, "{s}@{}", self.offset)
    }
}

impl FromStr for Word {
    type Err = Error;
    /// `0101@-3`; a missing `@offset` means offset 0.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (bits, offset) = match s.split_once('@') {
            Some((b, o)) => (
                b,
                o.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::MalformedSpec(format!("bad offset in {s:?}")))?,
            ),
            None => (s, 0),
        };
        let parsed: Result<Vec<bool>> = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::MalformedSpec(format!("bad word {s:?}"))),
            })
            .collect();
        Ok(Word::from_bits(offset, parsed?))
    }
}

/// Words up to this length also carry their bit string in JSON.
const JSON_BITS_LIMIT: u64 = 4096;

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Word", 4)?;
        st.serialize_field("offset", &self.offset)?;
        st.serialize_field("length", &self.len)?;
        st.serialize_field("support", &self.support)?;
        if self.len <= JSON_BITS_LIMIT {
            st.serialize_field("word", &self.to_string())?;
        }
        st.end()
    }
}
