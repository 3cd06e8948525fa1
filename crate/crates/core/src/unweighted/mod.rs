//! Unweighted unions `sum_{r in R} A_r` of distance graphs of `J(2k, k)`.
//!
//! The spectrum is integral, and with integer gaps `d_x = f(x+1) - f(x)` PST
//! exists iff every `d_x` is nonzero with the same 2-adic valuation `h`. The
//! earliest time is then `pi / (2^h z)` with `2^h z = gcd(d_x)`.

mod search;

pub use search::{
    search_all, search_sampled, solve_thm41, ResidueCondition, ResidueConstraint, SearchHit,
    DEFAULT_FREE_BITS_CAP, DEFAULT_SEARCH_CAP,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactmath::{binom_mod_p, floor_log2, gcd_all, nu2, ExactInt, ExactRat};
use crate::scheme::{spectrum_union, weights_to_coeffs, WeightVector};
use crate::transfer::{integer_gaps_time, PstCertificate};

pub const DEFAULT_PI2_CAP: usize = 24;

/// Which distance classes `r in 1..=k` take part in a union; bit `r - 1` of
/// the mask is `w_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnionSelector {
    k: usize,
    mask: u64,
}

impl UnionSelector {
    pub fn from_mask(k: usize, mask: u64) -> Result<Self> {
        if k == 0 || k > 64 {
            return Err(Error::invalid(format!("need 1 <= k <= 64, got {k}")));
        }
        if mask == 0 {
            return Err(Error::invalid("a selector must choose at least one class"));
        }
        if k < 64 && mask >> k != 0 {
            return Err(Error::invalid(format!("mask {mask:#x} selects classes above k = {k}")));
        }
        Ok(UnionSelector { k, mask })
    }

    /// From the wire format: ascending class indices, e.g. `[1, 2]`.
    pub fn from_classes(k: usize, classes: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &r in classes {
            if r == 0 || r > k {
                return Err(Error::invalid(format!("class {r} is outside 1..={k}")));
            }
            mask |= 1 << (r - 1);
        }
        Self::from_mask(k, mask)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, r: usize) -> bool {
        r >= 1 && r <= self.k && self.mask >> (r - 1) & 1 == 1
    }

    pub fn classes(&self) -> Vec<usize> {
        (1..=self.k).filter(|&r| self.contains(r)).collect()
    }

    /// `w_1 w_2 ... w_k` read as a big-endian binary number.
    pub fn sort_key(&self) -> u64 {
        (1..=self.k).fold(0u64, |acc, r| (acc << 1) | u64::from(self.contains(r)))
    }

    /// `w_0 = 0, w_1..w_k` as exact weights.
    pub fn to_weights(&self) -> WeightVector {
        let entries = (0..=self.k)
            .map(|r| BigRational::from_integer(BigInt::from(u8::from(self.contains(r)))))
            .collect();
        WeightVector::new(self.k, entries).expect("k + 1 entries")
    }
}

pub(crate) fn sort_canonical(v: &mut [UnionSelector]) {
    v.sort_by_key(UnionSelector::sort_key);
}

/// [`PstCertificate`] plus the integer data behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionVerdict {
    pub certificate: PstCertificate,
    /// `f(x+1) - f(x)` for `x = 0..k`.
    pub differences: Vec<ExactInt>,
    /// `nu_2(gcd d_x)`, present iff PST.
    pub h: Option<u64>,
    /// Odd part of `gcd d_x`, present iff PST.
    pub z: Option<ExactInt>,
}

impl UnionVerdict {
    pub fn has_pst(&self) -> bool {
        self.certificate.verdict
    }
}

pub fn check_union(k: usize, u: &UnionSelector) -> Result<UnionVerdict> {
    if u.k() != k {
        return Err(Error::invalid(format!("selector is for k = {}, not {k}", u.k())));
    }
    let f = spectrum_union(k, u.classes());
    let differences: Vec<ExactInt> = f.windows(2).map(|p| &p[1] - &p[0]).collect();

    let gap_gcd = integer_gaps_time(&differences);
    debug_assert!(gap_gcd.as_ref().map_or(true, |g| {
        // gcd of the gaps equals gcd(c_1..c_k), G being unimodular
        let c = weights_to_coeffs(k, &u.to_weights()).expect("valid").to_integers().expect("integral");
        gcd_all(&c[1..]) == *g
    }));

    // Evidence is taken at tau/pi = 1/gcd when the gcd is nonzero.
    let g = gap_gcd.clone().unwrap_or_else(|| gcd_all(&differences));
    let time = if g.is_zero() { BigRational::one() } else { BigRational::new(BigInt::one(), g.clone()) };
    let evidence = differences.iter().map(|d| BigRational::from_integer(d.clone()) * &time).collect();
    let certificate = PstCertificate::from_evidence(k, &time, evidence);
    debug_assert_eq!(certificate.verdict, gap_gcd.is_some());

    let (h, z) = match &gap_gcd {
        Some(g) => {
            let h = nu2(g)?;
            (Some(h), Some(g >> h))
        }
        None => (None, None),
    };
    Ok(UnionVerdict { certificate, differences, h, z })
}

fn powers_of_two_upto(k: usize) -> impl Iterator<Item = usize> {
    (0..=floor_log2(k)).map(|i| 1usize << i)
}

/// Selector `w_r = sum_{j in T} C(k - r, j - r) mod 2`, which has PST at
/// `pi/2` whenever `T` contains every power of two up to `k`.
pub fn pi2_family(k: usize, t: &[usize]) -> Result<UnionSelector> {
    if k == 0 || k > 64 {
        return Err(Error::invalid(format!("need 1 <= k <= 64, got {k}")));
    }
    if let Some(&bad) = t.iter().find(|&&j| j == 0 || j > k) {
        return Err(Error::invalid(format!("T element {bad} is outside 1..={k}")));
    }
    if let Some(p) = powers_of_two_upto(k).find(|p| !t.contains(p)) {
        return Err(Error::MissingPowerOfTwo(p));
    }
    let mut set: Vec<usize> = t.to_vec();
    set.sort_unstable();
    set.dedup();
    let mut mask = 0u64;
    for r in 1..=k {
        let parity = set
            .iter()
            .filter(|&&j| j >= r)
            .map(|&j| binom_mod_p((k - r) as u64, (j - r) as u64, 2).expect("2 is prime"))
            .sum::<u64>()
            % 2;
        mask |= parity << (r - 1);
    }
    UnionSelector::from_mask(k, mask)
}

fn free_elements(k: usize) -> Vec<usize> {
    (1..=k).filter(|j| !j.is_power_of_two()).collect()
}

fn t_from_bits(k: usize, free: &[usize], bits: u64) -> Vec<usize> {
    let mut t: Vec<usize> = powers_of_two_upto(k).collect();
    t.extend(free.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &j)| j));
    t.sort_unstable();
    t
}

/// Every selector with PST at `pi/2`; there are `2^(k - floor(log2 k) - 1)`.
pub fn enumerate_pi2(k: usize, cap: usize) -> Result<Vec<UnionSelector>> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    if k > cap {
        return Err(Error::capacity("pi/2 enumeration k", k as u128, cap as u128));
    }
    let free = free_elements(k);
    let mut out = (0..1u64 << free.len())
        .map(|bits| pi2_family(k, &t_from_bits(k, &free, bits)))
        .collect::<Result<Vec<_>>>()?;
    sort_canonical(&mut out);
    Ok(out)
}

/// `count` random members of the `pi/2` family (distinct `T`, so distinct
/// selectors), reproducible from `seed`.
pub fn sample_pi2(k: usize, count: usize, seed: u64) -> Result<Vec<(Vec<usize>, UnionSelector)>> {
    if k == 0 || k > 64 {
        return Err(Error::invalid(format!("need 1 <= k <= 64, got {k}")));
    }
    let free = free_elements(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::BTreeSet::new();
    let total: u128 = 1u128 << free.len();
    let want = (count as u128).min(total) as usize;
    while seen.len() < want {
        seen.insert(rng.gen::<u64>() & ((1u64 << free.len()) - 1));
    }
    seen.into_iter()
        .map(|bits| {
            let t = t_from_bits(k, &free, bits);
            pi2_family(k, &t).map(|u| (t, u))
        })
        .collect()
}

/// The `pi/4` union on `J(62, 31)`.
pub const J62_CLASSES: [usize; 15] = [7, 11, 13, 14, 15, 19, 21, 22, 23, 25, 26, 27, 28, 29, 30];

/// Check the `J(62, 31)` union; PST at `pi/4` means `h = 2`, `z = 1`.
pub fn verify_j62() -> Result<UnionVerdict> {
    check_union(31, &UnionSelector::from_classes(31, &J62_CLASSES)?)
}

/// `tau / pi = 1 / (2^h z)` as an exact rational.
pub fn time_from(h: u64, z: &ExactInt) -> ExactRat {
    BigRational::new(BigInt::one(), (BigInt::one() << h) * z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sel(k: usize, classes: &[usize]) -> UnionSelector {
        UnionSelector::from_classes(k, classes).unwrap()
    }

    #[test]
    fn selector_basics() {
        let u = sel(3, &[1, 2]);
        assert_eq!(u.classes(), vec![1, 2]);
        assert_eq!(u.sort_key(), 0b110);
        assert!(UnionSelector::from_classes(3, &[]).is_err());
        assert!(UnionSelector::from_classes(3, &[4]).is_err());
        assert!(UnionSelector::from_mask(3, 0b1000).is_err());
    }

    #[test]
    fn k3_union_of_first_two_classes() {
        let v = check_union(3, &sel(3, &[1, 2])).unwrap();
        assert!(v.has_pst());
        assert_eq!(v.differences, vec![BigInt::from(-2), BigInt::from(2), BigInt::from(18)]);
        assert_eq!(v.h, Some(1));
        assert_eq!(v.z, Some(BigInt::one()));
        assert_eq!(v.certificate.time_over_pi, Some(BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn k2_matching_and_octahedron() {
        let m = check_union(2, &sel(2, &[2])).unwrap();
        assert!(m.has_pst());
        assert_eq!(m.certificate.time_over_pi, Some(BigRational::new(1.into(), 2.into())));
        let o = check_union(2, &sel(2, &[1])).unwrap();
        assert!(!o.has_pst());
        assert!(o.h.is_none());
        assert!(o.certificate.failing_s.is_some());
    }

    #[test]
    fn singletons_transfer_only_at_top_class() {
        for k in 2..=10 {
            for r in 1..=k {
                assert_eq!(check_union(k, &sel(k, &[r])).unwrap().has_pst(), r == k, "k={k} r={r}");
            }
        }
    }

    #[test]
    fn pi2_examples() {
        assert_eq!(pi2_family(2, &[1, 2]).unwrap(), sel(2, &[2]));
        assert_eq!(pi2_family(3, &[1, 2]).unwrap(), sel(3, &[1, 2]));
        assert_eq!(pi2_family(3, &[1, 2, 3]).unwrap(), sel(3, &[3]));
        assert_eq!(pi2_family(1, &[1]).unwrap(), sel(1, &[1]));
        assert_eq!(pi2_family(4, &[1, 2, 3]).unwrap_err(), Error::MissingPowerOfTwo(4));
        assert!(pi2_family(4, &[1, 2, 4, 5]).is_err());
    }

    #[test]
    fn pi2_counts() {
        assert_eq!(enumerate_pi2(2, DEFAULT_PI2_CAP).unwrap(), vec![sel(2, &[2])]);
        assert_eq!(enumerate_pi2(3, DEFAULT_PI2_CAP).unwrap(), vec![sel(3, &[3]), sel(3, &[1, 2])]);
        assert_eq!(enumerate_pi2(4, DEFAULT_PI2_CAP).unwrap().len(), 2);
        assert!(matches!(enumerate_pi2(30, DEFAULT_PI2_CAP), Err(Error::Capacity { .. })));
    }

    #[test]
    fn pi2_samples_transfer_at_half_pi() {
        let samples = sample_pi2(40, 12, 7).unwrap();
        assert_eq!(samples.len(), 12);
        for (_, u) in &samples {
            let v = check_union(40, u).unwrap();
            assert!(v.has_pst());
            assert_eq!(v.h, Some(1));
        }
        assert_eq!(samples, sample_pi2(40, 12, 7).unwrap());
        // fewer members than requested: all of them
        assert_eq!(sample_pi2(3, 10, 1).unwrap().len(), 2);
    }

    #[test]
    fn j62_fixture() {
        let v = verify_j62().unwrap();
        assert!(v.has_pst());
        assert_eq!(v.h, Some(2));
        assert_eq!(v.z, Some(BigInt::one()));
        assert_eq!(v.certificate.time_over_pi, Some(time_from(2, &BigInt::one())));
    }
}
