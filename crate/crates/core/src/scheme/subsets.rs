//! k-subsets of `{1..n}` in colexicographic order.
//!
//! A subset is a `u64` bit mask with bit `i - 1` set for element `i`, so
//! `n <= 64`. Increasing mask value is exactly colex order, and the colex
//! rank of `{a_1 < ... < a_k}` is `sum_i C(a_i - 1, i)`.

use crate::error::{Error, Result};
use crate::exactmath::binom_u128;

pub type SubsetMask = u64;

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n > 64 || k > n {
        return Err(Error::invalid(format!("need k <= n <= 64, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// Number of k-subsets, `C(n, k)`.
pub fn count(n: usize, k: usize) -> u128 {
    binom_u128(n as u64, k as i64).expect("C(n,k) fits u128 for n <= 64")
}

/// Colex rank of a k-subset.
pub fn rank(mask: SubsetMask) -> u128 {
    let mut r = 0u128;
    let mut i = 0i64;
    let mut m = mask;
    while m != 0 {
        let a = m.trailing_zeros() as u64 + 1;
        i += 1;
        r += binom_u128(a - 1, i).expect("fits");
        m &= m - 1;
    }
    r
}

/// Inverse of [`rank`] for k-subsets of `{1..n}`.
pub fn unrank(n: usize, k: usize, mut rank: u128) -> Result<SubsetMask> {
    check_nk(n, k)?;
    if rank >= count(n, k) {
        return Err(Error::invalid(format!("rank {rank} out of range for C({n},{k})")));
    }
    let mut mask = 0u64;
    let mut hi = n as u64;
    for i in (1..=k as i64).rev() {
        // largest a with C(a - 1, i) <= rank
        let mut a = hi;
        while binom_u128(a - 1, i).expect("fits") > rank {
            a -= 1;
        }
        rank -= binom_u128(a - 1, i).expect("fits");
        mask |= 1 << (a - 1);
        hi = a - 1;
    }
    Ok(mask)
}

/// All k-subsets of `{1..n}` in colex order.
pub fn all(n: usize, k: usize) -> Result<Vec<SubsetMask>> {
    check_nk(n, k)?;
    let total = count(n, k) as usize;
    let mut out = Vec::with_capacity(total);
    if k == 0 {
        out.push(0);
        return Ok(out);
    }
    let mut v: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    for idx in 0..total {
        out.push(v);
        if idx + 1 == total {
            break;
        }
        // Gosper's hack: next larger mask with the same popcount.
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    Ok(out)
}

/// Elements of a subset, ascending, 1-based.
pub fn elements(mask: SubsetMask) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

/// Complement within `{1..n}`.
pub fn complement(n: usize, mask: SubsetMask) -> SubsetMask {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    !mask & full
}
