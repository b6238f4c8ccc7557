//! Row-style Hermite normal form over the integers and canonical reduction
//! modulo the lattice it spans.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// A sublattice of `Z^n` kept in Hermite normal form: rows are in echelon
/// form with positive pivots, and entries above each pivot lie in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ncols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(ncols: usize) -> Self {
        Lattice { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows(ncols: usize, input: &[Vec<i64>]) -> Self {
        let mut m: Vec<Vec<BigInt>> = input
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "row length mismatch");
                r.iter().map(|&x| BigInt::from(x)).collect()
            })
            .collect();
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        let mut top = 0usize;
        for col in 0..ncols {
            // gcd-combine everything below `top` into row `top`
            let mut pivot_row = None;
            for i in top..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                match pivot_row {
                    None => {
                        m.swap(top, i);
                        pivot_row = Some(top);
                    }
                    Some(p) => {
                        let a = m[p][col].clone();
                        let b = m[i][col].clone();
                        let eg = a.extended_gcd(&b);
                        let (g, x, y) = (eg.gcd, eg.x, eg.y);
                        let (ua, ub) = (&a / &g, &b / &g);
                        let (rp, ri) = (m[p].clone(), m[i].clone());
                        for c in col..ncols {
                            m[p][c] = &x * &rp[c] + &y * &ri[c];
                            m[i][c] = &ua * &ri[c] - &ub * &rp[c];
                        }
                    }
                }
            }
            if pivot_row.is_some() {
                if m[top][col].is_negative() {
                    for c in col..ncols {
                        m[top][c] = -&m[top][c];
                    }
                }
                pivots.push(col);
                top += 1;
            }
        }
        m.truncate(top);
        rows.extend(m);
        let mut lat = Lattice { ncols, rows, pivots };
        lat.reduce_upper();
        lat
    }

    fn reduce_upper(&mut self) {
        for k in 0..self.rows.len() {
            let col = self.pivots[k];
            for i in 0..k {
                let q = self.rows[i][col].div_floor(&self.rows[k][col]);
                if !q.is_zero() {
                    let rk = self.rows[k].clone();
                    for c in col..self.ncols {
                        self.rows[i][c] -= &q * &rk[c];
                    }
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical representative of `v` modulo the lattice: each pivot
    /// coordinate is brought into `[0, pivot)`.
    pub fn reduce_big(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        let mut out = v.to_vec();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            let q = out[col].div_floor(&row[col]);
            if !q.is_zero() {
                for c in col..self.ncols {
                    out[c] -= &q * &row[c];
                }
            }
        }
        out
    }

    /// [`Lattice::reduce_big`] on machine integers. Panics if a reduced
    /// coordinate does not fit in `i64`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.reduce_big(&big)
            .into_iter()
            .map(|x| x.to_i64().expect("reduced coordinate overflows i64"))
            .collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|x| *x == 0)
    }

    pub fn rows_i64(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().expect("basis entry overflows i64")).collect())
            .collect()
    }
}

/// The `ncols`-dimensional zero vector.
pub fn zero_vec(ncols: usize) -> Vec<i64> {
    vec![0; ncols]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn echelon_of_small_matrix() {
        let lat = Lattice::from_rows(3, &[vec![2, 4, 6], vec![3, 6, 9], vec![0, 0, 5]]);
        assert_eq!(lat.rows_i64(), vec![vec![1, 2, 3], vec![0, 0, 5]]);
        assert_eq!(lat.reduce(&[3, 7, 12]), vec![0, 1, 3]);
        assert!(lat.contains(&[2, 4, 11]));
        assert!(!lat.contains(&[0, 1, 0]));
    }

    #[test]
    fn empty_lattice_reduces_to_itself() {
        let lat = Lattice::zero(2);
        assert_eq!(lat.reduce(&[-3, 4]), vec![-3, 4]);
    }

    proptest! {
        #[test]
        fn reduction_is_canonical(
            rows in prop::collection::vec(prop::collection::vec(-6i64..7, 4), 0..4),
            v in prop::collection::vec(-20i64..21, 4),
            combo in prop::collection::vec(-3i64..4, 4),
        ) {
            let lat = Lattice::from_rows(4, &rows);
            let r = lat.reduce(&v);
            prop_assert_eq!(lat.reduce(&r), r.clone());
            // adding any lattice vector does not change the representative
            let mut w = v.clone();
            for (row, k) in rows.iter().zip(&combo) {
                for c in 0..4 {
                    w[c] += k * row[c];
                }
            }
            prop_assert_eq!(lat.reduce(&w), r);
            for row in &rows {
                prop_assert!(lat.contains(row));
            }
        }
    }
}
