//! Explicit distance graphs `J(n, k, r)` on k-subsets and exact checks of the
//! association-scheme axioms.

use num_traits::ToPrimitive;
use serde::Serialize;

use super::eigen::eigen_table;
use super::subsets::{self, SubsetMask};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const DEFAULT_VERTEX_CAP: usize = 5000;

/// Number of elements in which two k-subsets differ.
#[inline]
pub fn subset_distance(u: SubsetMask, v: SubsetMask) -> usize {
    (u & !v).count_ones() as usize
}

fn vertices_within_cap(n: usize, k: usize, cap: usize) -> Result<Vec<SubsetMask>> {
    if k > n || n > 64 {
        return Err(Error::invalid(format!("need k <= n <= 64, got n = {n}, k = {k}")));
    }
    let size = subsets::count(n, k);
    if size > cap as u128 {
        return Err(Error::capacity(format!("C({n},{k}) vertices"), size, cap as u128));
    }
    subsets::all(n, k)
}

/// 0/1 adjacency matrix of `J(n, k, r)` in colex vertex order.
pub fn adjacency(n: usize, k: usize, r: usize, cap: usize) -> Result<Matrix<u8>> {
    if r > k.min(n.saturating_sub(k)) {
        return Err(Error::invalid(format!("need 0 <= r <= min(k, n-k), got r = {r}")));
    }
    let verts = vertices_within_cap(n, k, cap)?;
    Ok(Matrix::from_fn(verts.len(), verts.len(), |i, j| {
        u8::from(subset_distance(verts[i], verts[j]) == r)
    }))
}

/// Neighbour lists for every distance class, `lists[r][u]`.
fn neighbour_lists(verts: &[SubsetMask], classes: usize) -> Vec<Vec<Vec<usize>>> {
    let mut lists = vec![vec![Vec::new(); verts.len()]; classes];
    for (i, &u) in verts.iter().enumerate() {
        for (j, &v) in verts.iter().enumerate() {
            lists[subset_distance(u, v)][i].push(j);
        }
    }
    lists
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    /// `(r, s)` pair that failed, when one applies.
    pub offending: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub n: usize,
    pub k: usize,
    pub vertices: usize,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Verify `A_0 = I`, `sum_r A_r = J`, symmetry, pairwise commutation and, for
/// `n = 2k`, `prod_s (A_r - p_r(s) I) = 0`, all in exact integer arithmetic.
pub fn scheme_axiom_check(n: usize, k: usize, cap: usize) -> Result<AxiomReport> {
    let verts = vertices_within_cap(n, k, cap)?;
    let size = verts.len();
    let classes = k.min(n - k) + 1;
    let lists = neighbour_lists(&verts, classes);
    let mut checks = Vec::new();

    let identity_ok = (0..size).all(|i| lists[0][i] == [i]);
    checks.push(AxiomCheck { name: "A_0 = I".into(), passed: identity_ok, offending: None });

    // Every ordered pair lands in exactly one class by construction of
    // `neighbour_lists`; count them to confirm sum_r A_r = J.
    let covered: usize = lists.iter().flatten().map(Vec::len).sum();
    checks.push(AxiomCheck {
        name: "sum_r A_r = J".into(),
        passed: covered == size * size,
        offending: None,
    });

    let mut sym_fail = None;
    for (r, class) in lists.iter().enumerate() {
        if class.iter().enumerate().any(|(i, nb)| nb.iter().any(|&j| !class[j].contains(&i))) {
            sym_fail = Some((r, r));
            break;
        }
    }
    checks.push(AxiomCheck { name: "A_r symmetric".into(), passed: sym_fail.is_none(), offending: sym_fail });

    let mut comm_fail = None;
    'outer: for r in 1..classes {
        for s in r + 1..classes {
            if product_rows(&lists[r], &lists[s]) != product_rows(&lists[s], &lists[r]) {
                comm_fail = Some((r, s));
                break 'outer;
            }
        }
    }
    checks.push(AxiomCheck {
        name: "A_r A_s = A_s A_r".into(),
        passed: comm_fail.is_none(),
        offending: comm_fail,
    });

    if n == 2 * k {
        let table = eigen_table(k);
        let mut fail = None;
        for r in 0..=k {
            let thetas: Vec<i128> = (0..=k)
                .map(|s| table.get(r, s).to_i128().expect("eigenvalue fits i128"))
                .collect();
            match annihilates(&lists[r], &thetas) {
                Ok(true) => {}
                Ok(false) => {
                    fail = Some((r, k));
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        checks.push(AxiomCheck {
            name: "prod_s (A_r - p_r(s) I) = 0".into(),
            passed: fail.is_none(),
            offending: fail,
        });
    }

    Ok(AxiomReport { n, k, vertices: size, checks })
}

/// Dense rows of `A_r A_s` from neighbour lists.
fn product_rows(a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<u32>> {
    let size = a.len();
    (0..size)
        .map(|u| {
            let mut row = vec![0u32; size];
            for &w in &a[u] {
                for &v in &b[w] {
                    row[v] += 1;
                }
            }
            row
        })
        .collect()
}

/// Whether `prod_s (A - theta_s I)` vanishes; overflow is an error, never a
/// silent wrap.
fn annihilates(nbrs: &[Vec<usize>], thetas: &[i128]) -> Result<bool> {
    let size = nbrs.len();
    let overflow = || Error::Numeric("integer overflow in annihilation product".into());
    // M = A - theta_0 I
    let mut m = vec![0i128; size * size];
    for u in 0..size {
        for &v in &nbrs[u] {
            m[u * size + v] = 1;
        }
        m[u * size + u] -= thetas[0];
    }
    for &theta in &thetas[1..] {
        let mut next = vec![0i128; size * size];
        for u in 0..size {
            let row = &m[u * size..(u + 1) * size];
            for v in 0..size {
                // (M A)[u][v] = sum over neighbours w of v (A symmetric)
                let mut acc = 0i128;
                for &w in &nbrs[v] {
                    acc = acc.checked_add(row[w]).ok_or_else(overflow)?;
                }
                let shift = theta.checked_mul(row[v]).ok_or_else(overflow)?;
                next[u * size + v] = acc.checked_sub(shift).ok_or_else(overflow)?;
            }
        }
        m = next;
    }
    Ok(m.iter().all(|&x| x == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octahedron() {
        let a = adjacency(4, 2, 1, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(a.rows(), 6);
        assert!(a.is_symmetric());
        for i in 0..6 {
            assert_eq!(a.row(i).iter().map(|&x| x as usize).sum::<usize>(), 4);
            assert_eq!(*a.get(i, i), 0);
        }
    }

    #[test]
    fn top_class_is_perfect_matching() {
        for k in 1..=5 {
            let n = 2 * k;
            let a = adjacency(n, k, k, DEFAULT_VERTEX_CAP).unwrap();
            let size = a.rows();
            for i in 0..size {
                let ones: Vec<_> = (0..size).filter(|&j| *a.get(i, j) == 1).collect();
                assert_eq!(ones.len(), 1);
                // partner is the complement, i.e. the mirrored colex rank
                assert_eq!(ones[0], size - 1 - i);
            }
        }
    }

    #[test]
    fn class_zero_is_identity() {
        let a = adjacency(6, 3, 0, DEFAULT_VERTEX_CAP).unwrap();
        for i in 0..20 {
            for j in 0..20 {
                assert_eq!(*a.get(i, j), u8::from(i == j));
            }
        }
    }

    #[test]
    fn general_n_valency() {
        // J(7,3,r) has valency C(3,r) C(4,r)
        for (r, val) in [(1, 12), (2, 18), (3, 4)] {
            let a = adjacency(7, 3, r, DEFAULT_VERTEX_CAP).unwrap();
            assert_eq!(a.row(0).iter().filter(|&&x| x == 1).count(), val);
        }
        assert!(adjacency(7, 3, 4, DEFAULT_VERTEX_CAP).is_err());
    }

    #[test]
    fn cap_enforced() {
        let err = adjacency(12, 6, 1, 100).unwrap_err();
        assert!(matches!(err, Error::Capacity { size: 924, cap: 100, .. }));
    }

    #[test]
    fn small_schemes_satisfy_axioms() {
        for (n, k) in [(4, 2), (6, 3), (7, 3)] {
            let rep = scheme_axiom_check(n, k, DEFAULT_VERTEX_CAP).unwrap();
            assert!(rep.all_passed(), "{rep:?}");
            assert_eq!(rep.checks.len(), if n == 2 * k { 5 } else { 4 });
        }
    }

    #[test]
    fn wrong_eigenvalues_do_not_annihilate() {
        let verts = subsets::all(6, 3).unwrap();
        let lists = neighbour_lists(&verts, 4);
        // true spectrum of A_1 on J(6,3) is {9, 3, -1, -3}
        assert!(annihilates(&lists[1], &[9, 3, -1, -3]).unwrap());
        assert!(!annihilates(&lists[1], &[9, 3, -1, -2]).unwrap());
    }
}
