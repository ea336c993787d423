//! Small number-theory helpers shared by the sieves and constructions.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serializer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// lcm of a slice, `None` on u128 overflow.
pub fn lcm_checked(values: &[u64]) -> Option<u128> {
    let mut acc: u128 = 1;
    for &v in values {
        let v = v as u128;
        let g = acc.gcd(&v);
        acc = (acc / g).checked_mul(v)?;
    }
    Some(acc)
}

pub fn lcm_big(values: &[u64]) -> BigUint {
    values
        .iter()
        .fold(BigUint::one(), |acc, &v| acc.lcm(&BigUint::from(v)))
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Largest `r` with `r^k <= n`.
pub fn integer_root(n: u64, k: u32) -> u64 {
    if k == 0 {
        return u64::MAX;
    }
    if k == 1 || n < 2 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64) as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|p| p > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|p| p <= n) {
        r += 1;
    }
    r
}

/// Solve `x ≡ residues[i] (mod moduli[i])` for pairwise coprime moduli.
/// Returns the solution in `[0, Π moduli)` together with the product.
pub fn crt(residues: &[u64], moduli: &[u64]) -> Option<(BigInt, BigInt)> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (&r, &b) in residues.iter().zip(moduli) {
        let b = BigInt::from(b);
        let r = BigInt::from(r);
        let e = m.extended_gcd(&b);
        if !e.gcd.is_one() {
            return None;
        }
        // x + m * t ≡ r (mod b)  =>  t ≡ (r - x) * m^{-1}
        let inv = e.x.mod_floor(&b);
        let t = ((&r - &x) * inv).mod_floor(&b);
        x += &m * t;
        m *= b;
        x = x.mod_floor(&m);
    }
    Some((x, m))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn unit_fraction(b: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(b))
}

/// Canonical `p/q` rendering in lowest terms (integers keep the `/1`).
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn serialize_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn serialize_rationals<S: Serializer>(rs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(rs.len()))?;
    for r in rs {
        seq.serialize_element(&format_rational(r))?;
    }
    seq.end()
}

pub fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn serialize_bigints<S: Serializer>(vs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(vs.len()))?;
    for v in vs {
        seq.serialize_element(&v.to_string())?;
    }
    seq.end()
}

/// Round to 12 significant digits; estimate fields only.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).clamp(0, 300) as usize;
    format!("{:.*}", decimals, x).parse().unwrap_or(x)
}

pub fn serialize_sig12<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(sig12(*x))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if d != 0.0 => n / d,
        _ => f64::NAN,
    }
}

pub fn clamp_nonnegative(r: BigRational) -> BigRational {
    if r.is_negative() {
        BigRational::zero()
    } else {
        r
    }
}
