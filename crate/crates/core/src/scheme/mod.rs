//! The Johnson scheme `J(2k, k)`: eigenvalues, the weight/coefficient
//! transform, and explicit subset-indexed adjacency matrices.
//!
//! Eigenvalues of a weighted graph `sum_r w_r A_r` are written
//! `f(x) = sum_r w_r p_r(k - x)` for `x = 0..=k`; equivalently
//! `f(x) = sum_j c_j C(x + j, 2j)` with `c = D S B S w`.

mod adjacency;
mod eigen;
mod structural;
pub mod subsets;

pub use adjacency::{
    adjacency, scheme_axiom_check, subset_distance, AxiomCheck, AxiomReport, DEFAULT_VERTEX_CAP,
};
pub use eigen::{dual_hahn, dual_hahn_x, eigen_table, EigenTable};
pub use structural::{build_structural, is_identity, multiply, IndexRange, StructuralMatrices};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{BinomTable, ExactInt, ExactRat};

/// `(k, n)` for the Johnson scheme `J(n, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SchemeParams {
    pub k: usize,
    pub n: usize,
}

impl SchemeParams {
    /// `J(n, k)` for any `1 <= k <= n`; only the adjacency builder accepts
    /// `n != 2k`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::invalid(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
        }
        Ok(SchemeParams { k, n })
    }

    /// The antipodal scheme `J(2k, k)`.
    pub fn antipodal(k: usize) -> Result<Self> {
        Self::new(2 * k, k)
    }

    pub fn is_antipodal(&self) -> bool {
        self.n == 2 * self.k
    }

    pub fn require_antipodal(&self) -> Result<()> {
        if self.is_antipodal() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "eigenvalue machinery needs n = 2k, got J({}, {})",
                self.n, self.k
            )))
        }
    }
}

/// Weights `w_0..w_m` on the distance classes of `J(2k, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    k: usize,
    entries: Vec<ExactRat>,
}

impl WeightVector {
    pub fn new(k: usize, entries: Vec<ExactRat>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be positive"));
        }
        if entries.is_empty() || entries.len() > k + 1 {
            return Err(Error::invalid(format!(
                "weight vector needs 1..={} entries for k = {k}, got {}",
                k + 1,
                entries.len()
            )));
        }
        Ok(WeightVector { k, entries })
    }

    pub fn from_integers(k: usize, entries: &[i64]) -> Result<Self> {
        Self::new(k, entries.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Highest class index carrying a weight.
    pub fn m(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[ExactRat] {
        &self.entries
    }

    pub fn get(&self, r: usize) -> ExactRat {
        self.entries.get(r).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn with_entry(mut self, r: usize, value: ExactRat) -> Self {
        self.entries[r] = value;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }
}

/// Coefficients `c_0..c_m` in the basis `C(x + j, 2j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffVector {
    entries: Vec<ExactRat>,
}

impl CoeffVector {
    pub fn new(entries: Vec<ExactRat>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("coefficient vector must be non-empty"));
        }
        Ok(CoeffVector { entries })
    }

    pub fn from_integers(entries: &[ExactInt]) -> Result<Self> {
        Self::new(entries.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn m(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[ExactRat] {
        &self.entries
    }

    /// The coefficients as integers, if all of them are.
    pub fn to_integers(&self) -> Option<Vec<ExactInt>> {
        self.entries
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

/// `c = D S B S w`, i.e. `c_j = C(2j,j) sum_{r>=j} (-1)^(r-j) C(k-j, r-j) w_r`.
pub fn weights_to_coeffs(k: usize, w: &WeightVector) -> Result<CoeffVector> {
    check_k(k, w.k())?;
    let m = w.m();
    let t = BinomTable::new(2 * k);
    let entries = (0..=m)
        .map(|j| {
            let mut acc = BigRational::zero();
            for r in j..=m {
                let term = &w.entries[r] * BigRational::from_integer(t.get(k - j, (r - j) as i64).clone());
                if (r - j) % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc * BigRational::from_integer(t.get(2 * j, j as i64).clone())
        })
        .collect();
    CoeffVector::new(entries)
}

/// `w = B D^{-1} c`, the inverse of [`weights_to_coeffs`].
pub fn coeffs_to_weights(k: usize, c: &CoeffVector) -> Result<WeightVector> {
    let m = c.m();
    if k == 0 || m > k {
        return Err(Error::invalid(format!("need 1 <= k and m <= k, got k = {k}, m = {m}")));
    }
    let t = BinomTable::new(2 * k);
    let entries = (0..=m)
        .map(|r| {
            (r..=m).fold(BigRational::zero(), |acc, j| {
                acc + &c.entries[j]
                    * BigRational::new(t.get(k - r, (j - r) as i64).clone(), t.get(2 * j, j as i64).clone())
            })
        })
        .collect();
    WeightVector::new(k, entries)
}

/// Eigenvalues `f(0..=k)` of `sum_r w_r A_r` from the eigenvalue table.
pub fn spectrum_weighted(k: usize, w: &WeightVector) -> Result<Vec<ExactRat>> {
    check_k(k, w.k())?;
    let table = eigen_table(k);
    Ok((0..=k)
        .map(|x| {
            w.entries.iter().enumerate().fold(BigRational::zero(), |acc, (r, wr)| {
                if wr.is_zero() {
                    acc
                } else {
                    acc + wr * BigRational::from_integer(table.at_x(r, x).clone())
                }
            })
        })
        .collect())
}

/// Eigenvalues `f(0..=k) = sum_j c_j C(x + j, 2j)`.
pub fn spectrum_from_coeffs(k: usize, c: &CoeffVector) -> Vec<ExactRat> {
    let t = BinomTable::new(2 * k + c.m());
    (0..=k)
        .map(|x| {
            c.entries.iter().enumerate().fold(BigRational::zero(), |acc, (j, cj)| {
                acc + cj * BigRational::from_integer(t.get(x + j, 2 * j as i64).clone())
            })
        })
        .collect()
}

/// Integer eigenvalues of an unweighted union `sum_{r in set} A_r`.
pub fn spectrum_union(k: usize, classes: impl IntoIterator<Item = usize>) -> Vec<ExactInt> {
    let table = eigen_table(k);
    let mut f = vec![BigInt::zero(); k + 1];
    for r in classes {
        for (x, fx) in f.iter_mut().enumerate() {
            *fx += table.at_x(r, x);
        }
    }
    f
}

fn check_k(k: usize, wk: usize) -> Result<()> {
    if k != wk {
        return Err(Error::invalid(format!("weight vector is for k = {wk}, not {k}")));
    }
    Ok(())
}
