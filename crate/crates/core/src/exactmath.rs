//! Exact integer and rational helpers: binomial coefficients, base-`p` digit
//! sums, `p`-adic valuations of binomials (Kummer) and binomials modulo a
//! prime (Lucas).
//!
//! Integers are [`num_bigint::BigInt`] and rationals are
//! [`num_rational::BigRational`]; both are immutable values that are `Send`
//! and `Sync`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Signed integer of unbounded magnitude.
pub type ExactInt = BigInt;

/// Reduced fraction with a positive denominator.
pub type ExactRat = BigRational;

/// Binomial coefficient `C(a, b)` with `C(a, b) = 0` when `b < 0` or `b > a`.
///
/// The top argument is unsigned: generalized binomials with negative `a` are
/// never needed.
pub fn binom(a: u64, b: i64) -> ExactInt {
    if b < 0 || b as u64 > a {
        return BigInt::zero();
    }
    let b = b as u64;
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// `C(a, b)` as a `u128`, or `None` on overflow. Same vanishing convention as
/// [`binom`].
pub fn binom_u128(a: u64, b: i64) -> Option<u128> {
    if b < 0 || b as u64 > a {
        return Some(0);
    }
    let b = b as u64;
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b as u128 {
        // acc * (a - i) is divisible by (i + 1); split through the gcd to
        // delay overflow.
        let num = a as u128 - i;
        let den = i + 1;
        let g = acc.gcd(&den);
        let (acc_r, den_r) = (acc / g, den / g);
        acc = acc_r.checked_mul(num / den_r)?;
    }
    Some(acc)
}

/// Pascal triangle `C(a, b)` for `0 <= a <= max_a`, with the same vanishing
/// convention as [`binom`].
#[derive(Debug, Clone)]
pub struct BinomTable {
    rows: Vec<Vec<ExactInt>>,
    zero: ExactInt,
}

impl BinomTable {
    pub fn new(max_a: usize) -> Self {
        let mut rows: Vec<Vec<ExactInt>> = Vec::with_capacity(max_a + 1);
        for a in 0..=max_a {
            let mut row = vec![BigInt::one(); a + 1];
            for b in 1..a {
                row[b] = &rows[a - 1][b - 1] + &rows[a - 1][b];
            }
            rows.push(row);
        }
        BinomTable { rows, zero: BigInt::zero() }
    }

    pub fn max_a(&self) -> usize {
        self.rows.len() - 1
    }

    /// Panics if `a` exceeds the table size.
    pub fn get(&self, a: usize, b: i64) -> &ExactInt {
        if b < 0 || b as usize > a {
            return &self.zero;
        }
        &self.rows[a][b as usize]
    }
}

/// Primality by trial division; primes here are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Sum of the base-`p` digits of `n`.
pub fn digit_sum(n: &ExactInt, p: u64) -> Result<u64> {
    require_prime(p)?;
    if n.is_negative() {
        return Err(Error::invalid(format!("digit_sum needs n >= 0, got {n}")));
    }
    Ok(n.to_radix_le(p as u32).1.iter().map(|&d| d as u64).sum())
}

fn digit_sum_u64(mut n: u64, p: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// `nu_p(C(a, b))` by Kummer's digit-sum formula.
pub fn binom_valuation(a: u64, b: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    if b > a {
        return Err(Error::invalid(format!(
            "binom_valuation needs 0 <= b <= a, got a = {a}, b = {b}"
        )));
    }
    let carries = digit_sum_u64(b, p) + digit_sum_u64(a - b, p) - digit_sum_u64(a, p);
    Ok(carries / (p - 1))
}

/// `C(a, b) mod p` as the product of digit-wise binomials (Lucas).
pub fn binom_mod_p(a: u64, b: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    let (mut a, mut b) = (a, b);
    let mut acc: u128 = 1;
    let pm = p as u128;
    while b > 0 || a > 0 {
        let (ad, bd) = (a % p, b % p);
        if bd > ad {
            return Ok(0);
        }
        acc = acc * small_binom_mod(ad, bd, p) % pm;
        a /= p;
        b /= p;
    }
    Ok(acc as u64)
}

/// `C(a, b) mod p` for digits `b <= a < p`.
fn small_binom_mod(a: u64, b: u64, p: u64) -> u128 {
    let pm = p as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..b.min(a - b) as u128 {
        num = num * (a as u128 - i) % pm;
        den = den * (i + 1) % pm;
    }
    num * pow_mod(den, pm - 2, pm) % pm
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// 2-adic valuation of a nonzero integer.
pub fn nu2(n: &ExactInt) -> Result<u64> {
    n.trailing_zeros()
        .ok_or_else(|| Error::invalid("nu2 of zero is undefined"))
}

/// `n / 2^nu2(n)`, keeping the sign of `n`.
pub fn odd_part(n: &ExactInt) -> Result<ExactInt> {
    let v = nu2(n)?;
    Ok(n / (BigInt::one() << v))
}

/// Non-negative gcd of a list; the gcd of an empty or all-zero list is 0.
pub fn gcd_all<'a, I>(values: I) -> ExactInt
where
    I: IntoIterator<Item = &'a ExactInt>,
{
    values
        .into_iter()
        .fold(BigInt::zero(), |g, v| g.gcd(v))
}

/// `floor(log2 k)` for `k >= 1`.
pub fn floor_log2(k: usize) -> u32 {
    debug_assert!(k >= 1);
    usize::BITS - 1 - k.leading_zeros()
}

pub fn is_power_of_two(j: usize) -> bool {
    j.is_power_of_two()
}

/// True iff `q` is an integer and odd.
pub fn is_odd_integer(q: &ExactRat) -> bool {
    q.is_integer() && q.numer().is_odd()
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a, I>(values: I) -> ExactInt
where
    I: IntoIterator<Item = &'a ExactRat>,
{
    values
        .into_iter()
        .fold(BigInt::one(), |l, v| l.lcm(v.denom()))
}

/// Best-effort conversion for display and the numeric oracle.
pub fn rat_to_f64(q: &ExactRat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parse `"a"`, `"-a/b"` style text into a reduced rational.
pub fn parse_rational(text: &str) -> Result<ExactRat> {
    let t = text.trim();
    let bad = || Error::invalid(format!("cannot parse rational {text:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}
