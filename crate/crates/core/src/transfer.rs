//! Perfect state transfer on weighted graphs `sum_r w_r A_r` of `J(2k, k)`.
//!
//! Transfer can only happen between a k-subset and its complement. It
//! happens at time `tau` iff `tau (f(x+1) - f(x)) / pi` is an odd integer for
//! every `x = 0..k`. Times are always carried as the exact rational `tau / pi`.
//!
//! Weights with PST exist iff `m >= 2^floor(log2 k)`; they are exactly
//! `w_r = (pi/tau) sum_{j>=r} c_j C(k-r, j-r) / C(2j, j)` with integer `c_j`
//! odd precisely at powers of two.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{
    denominator_lcm, floor_log2, gcd_all, is_odd_integer, nu2, BinomTable, ExactInt, ExactRat,
};
use crate::scheme::{spectrum_weighted, weights_to_coeffs, WeightVector};

pub const ANTIPODAL_PAIR_NOTE: &str = "antipodal (complementary k-subsets)";

/// Outcome of a PST test at one time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PstCertificate {
    pub verdict: bool,
    /// `tau / pi`, present iff `verdict`.
    pub time_over_pi: Option<ExactRat>,
    /// `tau (f(x+1) - f(x)) / pi` for `x = 0..k`, i.e. `tau (theta_{s-1} -
    /// theta_s) / pi` with `s = k - x`.
    pub parity_evidence: Vec<ExactRat>,
    /// First `s` (scanning `x` upward) whose entry is not an odd integer.
    pub failing_s: Option<usize>,
    pub pair_note: &'static str,
}

impl PstCertificate {
    pub(crate) fn from_evidence(k: usize, tau_over_pi: &ExactRat, evidence: Vec<ExactRat>) -> Self {
        let failing_x = evidence.iter().position(|e| !is_odd_integer(e));
        let verdict = failing_x.is_none();
        PstCertificate {
            verdict,
            time_over_pi: verdict.then(|| tau_over_pi.clone()),
            parity_evidence: evidence,
            failing_s: failing_x.map(|x| k - x),
            pair_note: ANTIPODAL_PAIR_NOTE,
        }
    }
}

fn adjacent_differences(f: &[ExactRat]) -> Vec<ExactRat> {
    f.windows(2).map(|p| &p[1] - &p[0]).collect()
}

/// Parity criterion at `tau / pi`.
pub fn pst_check(k: usize, w: &WeightVector, tau_over_pi: &ExactRat) -> Result<PstCertificate> {
    if !tau_over_pi.is_positive() {
        return Err(Error::invalid(format!("tau/pi must be positive, got {tau_over_pi}")));
    }
    let f = spectrum_weighted(k, w)?;
    let evidence = adjacent_differences(&f)
        .into_iter()
        .map(|d| d * tau_over_pi)
        .collect();
    Ok(PstCertificate::from_evidence(k, tau_over_pi, evidence))
}

/// Earliest PST time `tau / pi`, or `None` when there is no PST at any time.
///
/// With `L` the lcm of the weight denominators and `d'_x = L (f(x+1) -
/// f(x))`, PST exists iff all `d'_x` are nonzero with one common 2-adic
/// valuation; the earliest time is then `L / gcd(d'_x)` and every PST time is
/// an odd multiple of it.
pub fn minimal_pst_time(k: usize, w: &WeightVector) -> Result<Option<ExactRat>> {
    let f = spectrum_weighted(k, w)?;
    let scale = denominator_lcm(w.entries());
    let scaled: Vec<ExactInt> = adjacent_differences(&f)
        .into_iter()
        .map(|d| (d * BigRational::from_integer(scale.clone())).to_integer())
        .collect();
    Ok(integer_gaps_time(&scaled).map(|g| BigRational::new(scale, g)))
}

/// `gcd` of integer gaps when they are all nonzero with a shared 2-adic
/// valuation.
pub(crate) fn integer_gaps_time(gaps: &[ExactInt]) -> Option<ExactInt> {
    if gaps.is_empty() || gaps.iter().any(Zero::is_zero) {
        return None;
    }
    let v0 = nu2(&gaps[0]).ok()?;
    if gaps.iter().any(|d| nu2(d).ok() != Some(v0)) {
        return None;
    }
    Some(gcd_all(gaps))
}

/// Parity pattern diagnostics for `c_1..c_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityReport {
    pub valid: bool,
    /// Indices `j` whose parity is wrong.
    pub offending: Vec<usize>,
}

/// `c_j` odd exactly when `j` is a power of two. `c[0]` is `c_1`.
pub fn validate_parity(k: usize, m: usize, c: &[ExactInt]) -> Result<ParityReport> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let min_m = 1usize << floor_log2(k);
    if m < min_m || m > k {
        return Err(Error::invalid(format!(
            "parity pattern needs 2^floor(log2 k) = {min_m} <= m <= k = {k}, got m = {m}"
        )));
    }
    check_len(m, c)?;
    let offending: Vec<usize> = (1..=m)
        .filter(|&j| c[j - 1].is_odd() != j.is_power_of_two())
        .collect();
    Ok(ParityReport { valid: offending.is_empty(), offending })
}

fn check_len(m: usize, c: &[ExactInt]) -> Result<()> {
    if c.len() != m {
        return Err(Error::invalid(format!("expected {m} coefficients c_1..c_m, got {}", c.len())));
    }
    Ok(())
}

/// How [`construct_weights`] fixes the free diagonal weight `w_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalShift {
    /// `w_0 = 0`.
    #[default]
    Zero,
    /// `w_0` chosen so that `c_0 = 0`, which makes `f(0) = 0`.
    ZeroConstantTerm,
}

/// Weights with PST at `tau / pi` from integer coefficients `c_1..c_m`.
pub fn construct_weights(
    k: usize,
    m: usize,
    c: &[ExactInt],
    tau_over_pi: &ExactRat,
    shift: DiagonalShift,
) -> Result<WeightVector> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    if m > k {
        return Err(Error::invalid(format!("m = {m} exceeds k = {k}")));
    }
    let min_m = 1usize << floor_log2(k);
    if m < min_m {
        return Err(Error::Obstruction { k, m, min_m });
    }
    if !tau_over_pi.is_positive() {
        return Err(Error::invalid(format!("tau/pi must be positive, got {tau_over_pi}")));
    }
    let report = validate_parity(k, m, c)?;
    if !report.valid {
        return Err(Error::ParityPattern { offending: report.offending });
    }

    let t = BinomTable::new(2 * k);
    let inv_tau = tau_over_pi.recip();
    let mut entries = vec![BigRational::zero(); m + 1];
    for (r, slot) in entries.iter_mut().enumerate().skip(1) {
        let sum = (r..=m).fold(BigRational::zero(), |acc, j| {
            acc + BigRational::new(&c[j - 1] * t.get(k - r, (j - r) as i64), t.get(2 * j, j as i64).clone())
        });
        *slot = sum * &inv_tau;
    }
    if shift == DiagonalShift::ZeroConstantTerm {
        // c_0 = sum_r (-1)^r C(k, r) w_r
        let rest = entries.iter().enumerate().skip(1).fold(BigRational::zero(), |acc, (r, w)| {
            let term = w * BigRational::from_integer(t.get(k, r as i64).clone());
            if r % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        });
        entries[0] = -rest;
    }
    WeightVector::new(k, entries)
}

/// `c = D S B S w` when every entry is an integer; this happens iff the
/// spectrum is integral.
pub fn integral_spectrum_check(k: usize, w: &WeightVector) -> Result<Option<Vec<ExactInt>>> {
    Ok(weights_to_coeffs(k, w)?.to_integers())
}

/// `c_j = 3` at powers of two and `2` elsewhere, `m = k`, PST at `tau = pi`.
pub fn canonical_coeffs(k: usize) -> Vec<ExactInt> {
    (1..=k)
        .map(|j| BigInt::from(if j.is_power_of_two() { 3 } else { 2 }))
        .collect()
}

/// The weighting built from [`canonical_coeffs`].
pub fn canonical_example(k: usize) -> Result<WeightVector> {
    construct_weights(k, k, &canonical_coeffs(k), &BigRational::one(), DiagonalShift::Zero)
}

/// `g(2^l - 1) = sum_{j=1}^m c_j C(2^l + j - 1, 2j - 1)` for `m < 2^l`,
/// which is always even; an eigenvalue gap that can never be odd.
pub fn no_pst_witness(k: usize, m: usize, c: &[ExactInt]) -> Result<ExactInt> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let pow = 1usize << floor_log2(k);
    if m >= pow {
        return Err(Error::invalid(format!(
            "witness needs m < 2^floor(log2 k) = {pow}, got m = {m}"
        )));
    }
    check_len(m, c)?;
    let t = BinomTable::new(2 * pow);
    Ok((1..=m).fold(BigInt::zero(), |acc, j| {
        acc + &c[j - 1] * t.get(pow + j - 1, 2 * j as i64 - 1)
    }))
}
