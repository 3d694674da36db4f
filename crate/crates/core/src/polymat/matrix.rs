use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        let n = rows.len();
        Self { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    /// Like `from_rows`, but with an explicit column count so that a matrix
    /// with no rows keeps its width.
    pub fn from_rows_with_cols(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        let n = rows.len();
        Self { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Exact rank over Q by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut prev = BigInt::from(1);
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let (top, rest) = m.split_at_mut(r + 1);
            let pivot_row = &top[r];
            let pivot = pivot_row[c].clone();
            for row in rest.iter_mut() {
                let f = row[c].clone();
                for j in c + 1..self.cols {
                    let v = &pivot * &row[j] - &f * &pivot_row[j];
                    row[j] = v.div_floor(&prev);
                }
                row[c] = BigInt::zero();
            }
            prev = pivot;
            r += 1;
        }
        r
    }

    /// Rank over F_p. A lower bound for the rational rank.
    pub fn rank_mod_p(&self, p: u64) -> usize {
        let pb = BigInt::from(p);
        let mut m: Vec<Vec<u64>> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.mod_floor(&pb).to_u64().expect("residue fits"))
                    .collect()
            })
            .collect();
        let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, piv);
            let inv = crate::arith::mod_inverse(m[r][c], p).expect("prime modulus");
            for j in c..self.cols {
                m[r][j] = mulmod(m[r][j], inv);
            }
            for i in 0..self.rows {
                if i != r && m[i][c] != 0 {
                    let f = m[i][c];
                    for j in c..self.cols {
                        let s = mulmod(f, m[r][j]);
                        m[i][j] = (m[i][j] + p - s) % p;
                    }
                }
            }
            r += 1;
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int_matrix(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect())
    }

    #[test]
    fn identity_and_zero() {
        let id = IntMatrix::from_fn(5, 5, |i, j| BigInt::from((i == j) as i64));
        assert_eq!(id.rank(), 5);
        assert_eq!(IntMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(IntMatrix::zeros(0, 4).rank(), 0);
    }

    #[test]
    fn dependent_rows() {
        let m = int_matrix(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_mod_p(1_000_000_007), 2);
        // rank drops modulo 2
        let m = int_matrix(vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_mod_p(2), 1);
    }

    #[test]
    fn mul_vec_basic() {
        let m = int_matrix(vec![vec![1, 2], vec![3, 4]]);
        let v = [BigInt::from(1), BigInt::from(-1)];
        assert_eq!(m.mul_vec(&v), vec![BigInt::from(-1), BigInt::from(-1)]);
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(-3i64..4, 36)) {
            let m = IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(seed[i * 6 + j]));
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_agrees_with_large_prime(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(-9i64..10, 36)) {
            let m = IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(seed[i * 6 + j]));
            // every minor is below 5! * 10^5 < p in absolute value
            prop_assert_eq!(m.rank(), m.rank_mod_p(1_000_000_007));
        }
    }
}
