//! Eigenvalues `p_r(s)` of the Johnson scheme J(2k,k), given by the dual Hahn
//! polynomials.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactmath::{BinomTable, ExactInt};

fn check_range(k: usize, r: usize, other: usize, name: &str) -> Result<()> {
    if r > k || other > k {
        return Err(Error::invalid(format!(
            "need 0 <= r, {name} <= k = {k}, got r = {r}, {name} = {other}"
        )));
    }
    Ok(())
}

/// `p_r(s) = sum_j (-1)^(r-j) C(k-j, r-j) C(k-s, j) C(k-s+j, j)`.
pub fn dual_hahn(k: usize, r: usize, s: usize) -> Result<ExactInt> {
    check_range(k, r, s, "s")?;
    Ok(dual_hahn_with(&BinomTable::new(2 * k), k, r, s))
}

/// `p_r(k - x) = sum_j (-1)^(r-j) C(2j, j) C(k-j, r-j) C(x+j, 2j)`.
pub fn dual_hahn_x(k: usize, r: usize, x: usize) -> Result<ExactInt> {
    check_range(k, r, x, "x")?;
    Ok(dual_hahn_x_with(&BinomTable::new(2 * k), k, r, x))
}

pub(crate) fn dual_hahn_with(t: &BinomTable, k: usize, r: usize, s: usize) -> ExactInt {
    let mut acc = BigInt::zero();
    for j in 0..=r {
        let term = t.get(k - j, (r - j) as i64) * t.get(k - s, j as i64) * t.get(k - s + j, j as i64);
        if (r - j) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

pub(crate) fn dual_hahn_x_with(t: &BinomTable, k: usize, r: usize, x: usize) -> ExactInt {
    let mut acc = BigInt::zero();
    for j in 0..=r {
        let term = t.get(2 * j, j as i64) * t.get(k - j, (r - j) as i64) * t.get(x + j, 2 * j as i64);
        if (r - j) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// The `(k+1) x (k+1)` grid of eigenvalues, entry `(r, s)` being `p_r(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenTable {
    k: usize,
    entries: Vec<Vec<ExactInt>>,
}

impl EigenTable {
    pub fn new(k: usize) -> Self {
        let t = BinomTable::new(2 * k);
        let entries = (0..=k)
            .map(|r| (0..=k).map(|s| dual_hahn_with(&t, k, r, s)).collect())
            .collect();
        EigenTable { k, entries }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `p_r(s)`.
    pub fn get(&self, r: usize, s: usize) -> &ExactInt {
        &self.entries[r][s]
    }

    /// `p_r(k - x)`, the eigenvalue indexed by `x = k - s`.
    pub fn at_x(&self, r: usize, x: usize) -> &ExactInt {
        &self.entries[r][self.k - x]
    }

    pub fn row(&self, r: usize) -> &[ExactInt] {
        &self.entries[r]
    }

    pub fn rows(&self) -> &[Vec<ExactInt>] {
        &self.entries
    }
}

/// Shared, lazily built eigenvalue table for `J(2k, k)`.
pub fn eigen_table(k: usize) -> Arc<EigenTable> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<EigenTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("eigen cache poisoned").get(&k) {
        return Arc::clone(t);
    }
    // Build outside the lock; a racing builder produces an identical table.
    let table = Arc::new(EigenTable::new(k));
    cache
        .lock()
        .expect("eigen cache poisoned")
        .entry(k)
        .or_insert(table)
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::binom;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn octahedron_row() {
        // J(4,2,1) is the octahedron K_{2,2,2}: spectrum 4, 0, -2.
        let row: Vec<_> = (0..=2).map(|s| dual_hahn(2, 1, s).unwrap()).collect();
        assert_eq!(row, ints(&[4, 0, -2]));
        assert_eq!(dual_hahn_x(2, 1, 2).unwrap(), BigInt::from(4));
    }

    #[test]
    fn trivial_rows() {
        for k in 1..=12 {
            for s in 0..=k {
                assert_eq!(dual_hahn(k, 0, s).unwrap(), BigInt::from(1));
                assert_eq!(dual_hahn_x(k, 0, s).unwrap(), BigInt::from(1));
                let sign = if s % 2 == 0 { 1 } else { -1 };
                assert_eq!(dual_hahn(k, k, s).unwrap(), BigInt::from(sign));
            }
        }
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(dual_hahn(3, 4, 0).is_err());
        assert!(dual_hahn(3, 0, 4).is_err());
        assert!(dual_hahn_x(3, 1, 5).is_err());
    }

    #[test]
    fn column_sums() {
        // Column s = 0 holds valencies; other columns sum to zero since
        // sum_r A_r = J has spectrum {C(2k,k), 0}.
        for k in 1..=20 {
            let t = EigenTable::new(k);
            for s in 0..=k {
                let sum: BigInt = (0..=k).map(|r| t.get(r, s).clone()).sum();
                if s == 0 {
                    assert_eq!(sum, binom(2 * k as u64, k as i64));
                } else {
                    assert!(sum.is_zero(), "k={k} s={s}");
                }
            }
            for r in 0..=k {
                let c = binom(k as u64, r as i64);
                assert_eq!(t.get(r, 0), &(&c * &c));
            }
        }
    }

    #[test]
    fn closed_forms_agree() {
        for k in 1..=20 {
            let t = BinomTable::new(2 * k);
            for r in 0..=k {
                for x in 0..=k {
                    assert_eq!(dual_hahn_x_with(&t, k, r, x), dual_hahn_with(&t, k, r, k - x));
                }
            }
        }
    }

    #[test]
    fn cache_returns_same_table() {
        let a = eigen_table(7);
        let b = eigen_table(7);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(*a, EigenTable::new(7));
    }
}
