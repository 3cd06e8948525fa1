//! Finding unions with PST at `pi / 2^h`.
//!
//! Two independent routes:
//!
//! * [`solve_thm41`] works on `v = S B S u` and the residue conditions on
//!   `v_j mod 2^h` (which depend only on the binary digit sum of `j`). `B` is
//!   upper triangular with unit diagonal, so `v_j = u_j + (terms in u_r,
//!   r > j)`; assigning `u_k, u_{k-1}, ..., u_1` in turn fixes each `u_j`
//!   whenever index `j` is constrained, and only unconstrained indices branch.
//! * [`search_all`] walks every nonzero selector in Gray-code order, updating
//!   the integer spectrum by one eigenvalue column per step, and tests the
//!   eigenvalue gaps directly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_union, sort_canonical, time_from, UnionSelector};
use crate::error::{Error, Result};
use crate::exactmath::{binom_u128, ExactInt, ExactRat};
use crate::par::Execution;
use crate::scheme::eigen_table;

/// Largest `k` for the exhaustive search.
pub const DEFAULT_SEARCH_CAP: usize = 24;

/// Largest number of unconstrained indices [`solve_thm41`] will branch on.
pub const DEFAULT_FREE_BITS_CAP: usize = 24;

/// Condition on `v_j mod 2^h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueCondition {
    /// `v_j = residue (mod modulus)`.
    Exact { residue: u128, modulus: u128 },
    /// `v_j = 0 (mod modulus)`.
    Divisible { modulus: u128 },
    Free,
}

impl ResidueCondition {
    fn admits(&self, v: i128) -> bool {
        match *self {
            ResidueCondition::Exact { residue, modulus } => v.rem_euclid(modulus as i128) as u128 == residue,
            ResidueCondition::Divisible { modulus } => v.rem_euclid(modulus as i128) == 0,
            ResidueCondition::Free => true,
        }
    }
}

/// Conditions on `v = S B S u` for PST at exactly `pi / 2^h`.
///
/// With `t = sigma_2(j)`: `t = 1` requires `v_j = 2^(h-1) mod 2^h`; `2 <= t <=
/// h` requires `v_j = 0 mod 2^(h-t+1)`; `t > h` leaves `v_j` free, since then
/// `C(2j, j) v_j` is divisible by `2^(h+1)` for any integer `v_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueConstraint {
    pub h: u32,
    /// Entry `j - 1` is the condition at index `j`.
    pub conditions: Vec<ResidueCondition>,
}

impl ResidueConstraint {
    pub fn new(k: usize, h: u32) -> Result<Self> {
        if h == 0 || h > 100 {
            return Err(Error::invalid(format!("need 1 <= h <= 100, got {h}")));
        }
        let conditions = (1..=k)
            .map(|j| {
                let t = j.count_ones();
                if t == 1 {
                    ResidueCondition::Exact { residue: 1 << (h - 1), modulus: 1 << h }
                } else if t <= h {
                    ResidueCondition::Divisible { modulus: 1 << (h - t + 1) }
                } else {
                    ResidueCondition::Free
                }
            })
            .collect();
        Ok(ResidueConstraint { h, conditions })
    }

    pub fn free_count(&self) -> usize {
        self.conditions.iter().filter(|c| **c == ResidueCondition::Free).count()
    }

    /// Whether `u` satisfies every condition, evaluated directly.
    pub fn admits(&self, u: &UnionSelector) -> bool {
        let k = u.k();
        let table = SignedBinomMod::new(k, self.h);
        (1..=k).all(|j| {
            let v = table.v_j(j, |r| u.contains(r));
            self.conditions[j - 1].admits(v)
        })
    }
}

/// `(-1)^(r-j) C(k - j, r - j) mod 2^h`, as used in `v_j`.
struct SignedBinomMod {
    k: usize,
    modulus: i128,
    entries: Vec<Vec<i128>>,
}

impl SignedBinomMod {
    fn new(k: usize, h: u32) -> Self {
        let modulus: i128 = 1 << h;
        let entries = (0..=k)
            .map(|j| {
                (0..=k)
                    .map(|r| {
                        if r < j {
                            return 0;
                        }
                        let b = binom_u128((k - j) as u64, (r - j) as i64).expect("k <= 64") % modulus as u128;
                        let b = b as i128;
                        if (r - j) % 2 == 0 {
                            b
                        } else {
                            -b
                        }
                    })
                    .collect()
            })
            .collect();
        SignedBinomMod { k, modulus, entries }
    }

    /// `v_j = sum_{r >= j} (-1)^(r-j) C(k-j, r-j) u_r`, reduced mod `2^h`.
    fn v_j(&self, j: usize, u: impl Fn(usize) -> bool) -> i128 {
        let mut acc = 0i128;
        for r in j..=self.k {
            if u(r) {
                acc = (acc + self.entries[j][r]).rem_euclid(self.modulus);
            }
        }
        acc
    }
}

/// All nonzero selectors with PST at exactly `pi / 2^h` (2-adic exponent
/// `h` of the gap gcd), in canonical order.
pub fn solve_thm41(k: usize, h: u32, free_cap: usize, exec: Execution) -> Result<Vec<UnionSelector>> {
    if k == 0 || k > 64 {
        return Err(Error::invalid(format!("need 1 <= k <= 64, got {k}")));
    }
    let constraint = ResidueConstraint::new(k, h)?;
    let free = constraint.free_count();
    if free > free_cap {
        return Err(Error::capacity(
            format!("unconstrained indices for k = {k}, h = {h}"),
            free as u128,
            free_cap as u128,
        ));
    }
    let table = SignedBinomMod::new(k, h);

    // Expand the top levels breadth-first, then finish each branch depth-first.
    let mut frontier: Vec<(usize, u64)> = vec![(k, 0)];
    while !frontier.is_empty() && frontier.len() < 64 && frontier.iter().all(|&(j, _)| j > 0) {
        frontier = frontier
            .into_iter()
            .flat_map(|(j, mask)| extend(&table, &constraint, j, mask).into_iter().map(move |m| (j - 1, m)))
            .collect();
    }
    let parts = exec.map(frontier.len(), |i| {
        let (j, mask) = frontier[i];
        let mut out = Vec::new();
        dfs(&table, &constraint, j, mask, &mut out);
        out
    });
    let mut out: Vec<UnionSelector> = parts
        .into_iter()
        .flatten()
        .filter(|&m| m != 0)
        .map(|m| UnionSelector::from_mask(k, m).expect("mask within k"))
        .collect();
    sort_canonical(&mut out);
    Ok(out)
}

/// Admissible masks after deciding `u_j`, given `u_{j+1..k}` in `mask`.
fn extend(table: &SignedBinomMod, c: &ResidueConstraint, j: usize, mask: u64) -> Vec<u64> {
    let rest = table.v_j(j, |r| r > j && mask >> (r - 1) & 1 == 1);
    [0u64, 1]
        .into_iter()
        .filter(|&bit| c.conditions[j - 1].admits(rest + bit as i128))
        .map(|bit| mask | bit << (j - 1))
        .collect()
}

fn dfs(table: &SignedBinomMod, c: &ResidueConstraint, j: usize, mask: u64, out: &mut Vec<u64>) {
    if j == 0 {
        out.push(mask);
        return;
    }
    for next in extend(table, c, j, mask) {
        dfs(table, c, j - 1, next, out);
    }
}

/// A selector with PST, at `tau / pi = 1 / (2^h z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchHit {
    pub selector: UnionSelector,
    pub h: u64,
    pub z: ExactInt,
}

impl SearchHit {
    pub fn time_over_pi(&self) -> ExactRat {
        time_from(self.h, &self.z)
    }
}

/// Gap test on an `i128` spectrum: `Some(gcd)` iff every gap is nonzero with
/// one shared 2-adic valuation.
#[inline]
fn gaps_gcd(f: &[i128]) -> Option<u128> {
    let first = f[1] - f[0];
    if first == 0 {
        return None;
    }
    let v = first.trailing_zeros();
    let mut g = first.unsigned_abs();
    for w in f[1..].windows(2) {
        let d = w[1] - w[0];
        if d == 0 || d.trailing_zeros() != v {
            return None;
        }
        g = g.gcd(&d.unsigned_abs());
    }
    Some(g)
}

fn hit_from_gcd(selector: UnionSelector, g: u128) -> SearchHit {
    let h = g.trailing_zeros() as u64;
    SearchHit { selector, h, z: BigInt::from(g >> h) }
}

/// Classify every nonzero selector for `J(2k, k)`; returns those with PST
/// whose exponent is at most `h_max` (all of them for `None`), in canonical
/// order. Output does not depend on `exec`.
pub fn search_all(k: usize, h_max: Option<u64>, cap: usize, exec: Execution) -> Result<Vec<SearchHit>> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    if k > cap {
        return Err(Error::capacity("exhaustive search k", k as u128, cap as u128));
    }
    if k > 63 {
        return Err(Error::capacity("exhaustive search k", k as u128, 63));
    }
    let table = eigen_table(k);
    // columns[r][x] = p_r(k - x)
    let columns: Vec<Vec<i128>> = (0..=k)
        .map(|r| {
            (0..=k)
                .map(|x| table.at_x(r, x).to_i128().ok_or_else(|| Error::capacity("eigenvalue magnitude", 0, i128::MAX as u128)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let total: u64 = 1 << k;
    let chunk_bits = k.saturating_sub(6).min(16) as u32;
    let chunk: u64 = 1 << chunk_bits;
    let chunks = (total / chunk) as usize;

    let parts = exec.map(chunks, |c| {
        let start = c as u64 * chunk;
        let end = start + chunk;
        let mut out = Vec::new();
        let mut f = vec![0i128; k + 1];
        let mut gray = start ^ (start >> 1);
        for r in 1..=k {
            if gray >> (r - 1) & 1 == 1 {
                for (fx, col) in f.iter_mut().zip(&columns[r]) {
                    *fx += col;
                }
            }
        }
        for i in start..end {
            if i > start {
                let bit = i.trailing_zeros() as usize;
                gray ^= 1 << bit;
                let col = &columns[bit + 1];
                if gray >> bit & 1 == 1 {
                    f.iter_mut().zip(col).for_each(|(fx, c)| *fx += c);
                } else {
                    f.iter_mut().zip(col).for_each(|(fx, c)| *fx -= c);
                }
            }
            if gray == 0 {
                continue;
            }
            if let Some(g) = gaps_gcd(&f) {
                let hit = hit_from_gcd(UnionSelector::from_mask(k, gray).expect("nonzero"), g);
                if h_max.is_none_or(|hm| hit.h <= hm) {
                    out.push(hit);
                }
            }
        }
        out
    });
    let mut hits: Vec<SearchHit> = parts.into_iter().flatten().collect();
    hits.sort_by_key(|h| h.selector.sort_key());
    Ok(hits)
}

/// Random sampling for `k` beyond the exhaustive cap: tests `samples`
/// distinct random nonzero selectors (exactly, with bignum spectra) and
/// returns the hits in canonical order.
pub fn search_sampled(k: usize, samples: usize, seed: u64, h_max: Option<u64>, exec: Execution) -> Result<Vec<SearchHit>> {
    if k == 0 || k > 64 {
        return Err(Error::invalid(format!("need 1 <= k <= 64, got {k}")));
    }
    let space: u128 = (1u128 << k) - 1;
    let want = (samples as u128).min(space) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::BTreeSet::new();
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    while seen.len() < want {
        let m = rng.gen::<u64>() & full;
        if m != 0 {
            seen.insert(m);
        }
    }
    let masks: Vec<u64> = seen.into_iter().collect();
    let verdicts = exec.map(masks.len(), |i| {
        let u = UnionSelector::from_mask(k, masks[i]).expect("nonzero");
        check_union(k, &u).map(|v| (u, v))
    });
    let mut hits = Vec::new();
    for r in verdicts {
        let (u, v) = r?;
        if let (Some(h), Some(z)) = (v.h, v.z) {
            if h_max.map_or(true, |hm| h <= hm) {
                hits.push(SearchHit { selector: u, h, z });
            }
        }
    }
    hits.sort_by_key(|h| h.selector.sort_key());
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unweighted::{enumerate_pi2, DEFAULT_PI2_CAP, J62_CLASSES};

    fn sel(k: usize, classes: &[usize]) -> UnionSelector {
        UnionSelector::from_classes(k, classes).unwrap()
    }

    #[test]
    fn residue_conditions_for_h3() {
        let c = ResidueConstraint::new(8, 3).unwrap();
        assert_eq!(c.conditions[0], ResidueCondition::Exact { residue: 4, modulus: 8 });
        assert_eq!(c.conditions[2], ResidueCondition::Divisible { modulus: 4 }); // j = 3
        assert_eq!(c.conditions[6], ResidueCondition::Divisible { modulus: 2 }); // j = 7
        assert_eq!(c.free_count(), 0);
        let c = ResidueConstraint::new(8, 1).unwrap();
        assert_eq!(c.conditions[2], ResidueCondition::Free);
        assert_eq!(c.free_count(), 4);
        assert!(ResidueConstraint::new(3, 0).is_err());
    }

    #[test]
    fn k3_h1_matches_pi2_family() {
        let got = solve_thm41(3, 1, DEFAULT_FREE_BITS_CAP, Execution::Sequential).unwrap();
        assert_eq!(got, enumerate_pi2(3, DEFAULT_PI2_CAP).unwrap());
        assert_eq!(got, vec![sel(3, &[3]), sel(3, &[1, 2])]);
    }

    #[test]
    fn nothing_at_quarter_pi_for_tiny_k() {
        for k in 1..2 {
            assert!(solve_thm41(k, 2, DEFAULT_FREE_BITS_CAP, Execution::Sequential).unwrap().is_empty());
        }
        assert!(search_all(2, None, DEFAULT_SEARCH_CAP, Execution::Sequential)
            .unwrap()
            .iter()
            .all(|h| h.h == 1));
    }

    #[test]
    fn j62_is_among_quarter_pi_solutions() {
        let sols = solve_thm41(31, 2, DEFAULT_FREE_BITS_CAP, Execution::Parallel).unwrap();
        let target = sel(31, &J62_CLASSES);
        assert!(sols.contains(&target));
        assert!(ResidueConstraint::new(31, 2).unwrap().admits(&target));
        for u in sols.iter().take(20) {
            let v = check_union(31, u).unwrap();
            assert_eq!(v.h, Some(2), "{:?}", u.classes());
        }
    }

    #[test]
    fn free_cap_is_enforced() {
        assert!(matches!(
            solve_thm41(31, 1, DEFAULT_FREE_BITS_CAP, Execution::Sequential),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn small_search_tables() {
        let hits = search_all(2, None, DEFAULT_SEARCH_CAP, Execution::Sequential).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].selector, sel(2, &[2]));
        let hits = search_all(1, None, DEFAULT_SEARCH_CAP, Execution::Sequential).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].time_over_pi(), num_rational::BigRational::new(1.into(), 2.into()));
        assert!(matches!(search_all(25, None, DEFAULT_SEARCH_CAP, Execution::Sequential), Err(Error::Capacity { .. })));
    }

    #[test]
    fn gray_walk_matches_exact_checker() {
        for k in 1..=9 {
            let hits = search_all(k, None, DEFAULT_SEARCH_CAP, Execution::Sequential).unwrap();
            let mut expected = Vec::new();
            for m in 1..1u64 << k {
                let u = UnionSelector::from_mask(k, m).unwrap();
                let v = check_union(k, &u).unwrap();
                if let (Some(h), Some(z)) = (v.h, v.z) {
                    expected.push(SearchHit { selector: u, h, z });
                }
            }
            expected.sort_by_key(|h| h.selector.sort_key());
            assert_eq!(hits, expected, "k={k}");
        }
    }

    #[test]
    fn execution_does_not_change_output() {
        for k in [7, 11, 14] {
            let a = search_all(k, None, DEFAULT_SEARCH_CAP, Execution::Sequential).unwrap();
            let b = search_all(k, None, DEFAULT_SEARCH_CAP, Execution::ParallelWith { threads: 3 }).unwrap();
            assert_eq!(a, b);
            let a = solve_thm41(k, 1, DEFAULT_FREE_BITS_CAP, Execution::Sequential).unwrap();
            let b = solve_thm41(k, 1, DEFAULT_FREE_BITS_CAP, Execution::Parallel).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn h_max_filters() {
        let all = search_all(8, None, DEFAULT_SEARCH_CAP, Execution::Sequential).unwrap();
        let capped = search_all(8, Some(1), DEFAULT_SEARCH_CAP, Execution::Sequential).unwrap();
        assert_eq!(all.iter().filter(|h| h.h <= 1).count(), capped.len());
    }

    #[test]
    fn sampling_agrees_with_exhaustive() {
        let exhaustive = search_all(10, None, DEFAULT_SEARCH_CAP, Execution::Sequential).unwrap();
        // asking for more samples than selectors covers the whole space
        let sampled = search_sampled(10, 5000, 3, None, Execution::Parallel).unwrap();
        assert_eq!(sampled, exhaustive);
        let a = search_sampled(40, 200, 11, None, Execution::Sequential).unwrap();
        let b = search_sampled(40, 200, 11, None, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
