//! The matrices relating weights, coefficients and eigenvalue differences:
//!
//! * `D = diag(C(2j, j))`, `S = diag((-1)^j)`
//! * `B_{j,r} = C(k-j, r-j)` (reflected Pascal matrix, unimodular)
//! * `F_{x,j} = C(x+j, 2j)` for `x = 0..=k`
//! * `G_{x,j} = C(x+j, 2j-1)` for `x = 0..k`
//!
//! The weighted analysis indexes `j, r` over `0..=m`; the unweighted analysis
//! over `1..=k`. [`IndexRange`] makes the choice explicit at every call site.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{BinomTable, ExactInt};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexRange {
    /// `j, r = 0..=m`, used for weighted graphs with classes `0..=m`.
    Weighted { m: usize },
    /// `j, r = 1..=k`, used for unweighted unions.
    Unweighted,
}

impl IndexRange {
    pub fn indices(&self, k: usize) -> std::ops::RangeInclusive<usize> {
        match *self {
            IndexRange::Weighted { m } => 0..=m,
            IndexRange::Unweighted => 1..=k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralMatrices {
    pub k: usize,
    pub range: IndexRange,
    /// Actual index value of each matrix position.
    pub index: Vec<usize>,
    /// Diagonal of `D`.
    pub d: Vec<ExactInt>,
    /// Diagonal of `S`, entries `+1` / `-1`.
    pub s: Vec<i8>,
    pub b: Matrix<ExactInt>,
    pub f: Matrix<ExactInt>,
    pub g: Matrix<ExactInt>,
}

pub fn build_structural(k: usize, range: IndexRange) -> Result<StructuralMatrices> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    if let IndexRange::Weighted { m } = range {
        if m > k {
            return Err(Error::invalid(format!("m = {m} exceeds k = {k}")));
        }
    }
    let t = BinomTable::new(3 * k);
    let index: Vec<usize> = range.indices(k).collect();
    let n = index.len();
    let d = index.iter().map(|&j| t.get(2 * j, j as i64).clone()).collect();
    let s = index.iter().map(|&j| if j % 2 == 0 { 1 } else { -1 }).collect();
    let b = Matrix::from_fn(n, n, |a, c| {
        let (j, r) = (index[a], index[c]);
        t.get(k - j, r as i64 - j as i64).clone()
    });
    let f = Matrix::from_fn(k + 1, n, |x, c| {
        let j = index[c];
        t.get(x + j, 2 * j as i64).clone()
    });
    let g = Matrix::from_fn(k, n, |x, c| {
        let j = index[c];
        t.get(x + j, 2 * j as i64 - 1).clone()
    });
    Ok(StructuralMatrices { k, range, index, d, s, b, f, g })
}

impl StructuralMatrices {
    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// `S B S`, which equals `B^{-1}`.
    pub fn b_inverse(&self) -> Matrix<ExactInt> {
        let n = self.len();
        Matrix::from_fn(n, n, |i, j| {
            let v = self.b.get(i, j);
            if self.s[i] * self.s[j] < 0 {
                -v
            } else {
                v.clone()
            }
        })
    }

    /// `(S B)^2`, computed by an explicit integer product.
    pub fn sb_squared(&self) -> Matrix<ExactInt> {
        let n = self.len();
        let sb = Matrix::from_fn(n, n, |i, j| {
            let v = self.b.get(i, j);
            if self.s[i] < 0 {
                -v
            } else {
                v.clone()
            }
        });
        multiply(&sb, &sb)
    }

    /// Principal `2^l x 2^l` block of `G` mod 2, with columns `j = 1..=2^l`.
    /// `None` if the block does not fit in this index range.
    pub fn g_principal_block_mod2(&self, l: u32) -> Option<Matrix<u8>> {
        let size = 1usize << l;
        let first = self.index.iter().position(|&j| j == 1)?;
        if first + size > self.len() || size > self.g.rows() {
            return None;
        }
        Some(Matrix::from_fn(size, size, |x, c| {
            u8::from(self.g.get(x, first + c).is_odd())
        }))
    }
}

pub fn multiply(a: &Matrix<ExactInt>, b: &Matrix<ExactInt>) -> Matrix<ExactInt> {
    assert_eq!(a.cols(), b.rows());
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).fold(BigInt::zero(), |acc, t| {
            let x = a.get(i, t);
            if x.is_zero() {
                acc
            } else {
                acc + x * b.get(t, j)
            }
        })
    })
}

pub fn is_identity(m: &Matrix<ExactInt>) -> bool {
    m.rows() == m.cols()
        && (0..m.rows()).all(|i| {
            (0..m.cols()).all(|j| {
                let v = m.get(i, j);
                if i == j {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
        })
}
