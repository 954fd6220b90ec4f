//! Exact rational linear algebra: dense matrices over `BigRational` plus a
//! sparse row-echelon rank routine used by the ideal/character code.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;

pub type Q = BigRational;

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Render a rational as `p` or `p/q` (deterministic, lowest terms).
pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_from_string(s: &str) -> Option<Q> {
    let mut parts = s.splitn(2, '/');
    let n: BigInt = parts.next()?.trim().parse().ok()?;
    match parts.next() {
        None => Some(Q::from_integer(n)),
        Some(d) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn at(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let prod = a * b;
                        *out.at_mut(i, j) += prod;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() && !self.at(i, j).is_zero() {
                        acc += self.at(i, j) * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> QMat {
        let mut out = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a.at(col, col).clone();
            for j in 0..n {
                *a.at_mut(col, j) /= &p;
                *inv.at_mut(col, j) /= &p;
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for j in 0..n {
                    let t = &factor * a.at(col, j);
                    *a.at_mut(r, j) -= t;
                    let t = &factor * inv.at(col, j);
                    *inv.at_mut(r, j) -= t;
                }
            }
        }
        Some(inv)
    }

    /// Solve `self * x = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, rhs.len());
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                b.swap(pivot, col);
            }
            let p = a.at(col, col).clone();
            for j in col..n {
                *a.at_mut(col, j) /= &p;
            }
            b[col] = &b[col] / &p;
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for j in col..n {
                    let t = &factor * a.at(col, j);
                    *a.at_mut(r, j) -= t;
                }
                let t = &factor * &b[col];
                b[r] -= t;
            }
        }
        Some(b)
    }

    pub fn rank(&self) -> usize {
        sparse_rank(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(j, x)| (j, x.clone()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

pub type SparseRow = BTreeMap<usize, Q>;

fn reduce_row(row: &mut SparseRow, pivots: &BTreeMap<usize, SparseRow>) {
    loop {
        let lead = match row.keys().next() {
            Some(&c) => c,
            None => return,
        };
        let pivot_row = match pivots.get(&lead) {
            Some(r) => r,
            None => return,
        };
        let factor = row[&lead].clone();
        for (&c, v) in pivot_row {
            let delta = &factor * v;
            let entry = row.entry(c).or_insert_with(Q::zero);
            *entry -= delta;
            if entry.is_zero() {
                row.remove(&c);
            }
        }
    }
}

/// Incremental row-echelon rank of a set of sparse rational rows.
pub fn sparse_rank(rows: Vec<SparseRow>) -> usize {
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut row in rows {
        reduce_row(&mut row, &pivots);
        if let Some((&lead, _)) = row.iter().next() {
            let inv = row[&lead].clone();
            for v in row.values_mut() {
                *v /= &inv;
            }
            pivots.insert(lead, row);
        }
    }
    pivots.len()
}

/// Echelon basis of the row span (pivot-normalized), for reuse as a spanning set.
pub fn sparse_echelon(rows: Vec<SparseRow>) -> Vec<SparseRow> {
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut row in rows {
        reduce_row(&mut row, &pivots);
        if let Some((&lead, _)) = row.iter().next() {
            let inv = row[&lead].clone();
            for v in row.values_mut() {
                *v /= &inv;
            }
            pivots.insert(lead, row);
        }
    }
    pivots.into_values().collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = QMat::from_rows(vec![
            vec![qi(2), qi(-1), qi(0)],
            vec![qi(-1), qi(2), qi(-1)],
            vec![qi(0), qi(-1), qi(2)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(3));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = QMat::from_rows(vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]]);
        assert!(m.inverse().is_none());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_small_system() {
        let m = QMat::from_rows(vec![vec![qi(1), qi(1)], vec![qi(1), qi(-1)]]);
        let x = m.solve(&[qi(3), qi(1)]).unwrap();
        assert_eq!(x, vec![qi(2), qi(1)]);
    }

    #[test]
    fn rational_string_roundtrip() {
        for x in [qi(0), qi(5), qr(-3, 4), qr(22, 7)] {
            assert_eq!(q_from_string(&q_to_string(&x)).unwrap(), x);
        }
    }

    #[test]
    fn sparse_rank_counts_independent_rows() {
        let mk = |pairs: &[(usize, i64)]| {
            pairs.iter().map(|&(c, v)| (c, qi(v))).collect::<SparseRow>()
        };
        let rows = vec![
            mk(&[(0, 1), (1, 2)]),
            mk(&[(0, 2), (1, 4)]),
            mk(&[(2, 1)]),
            mk(&[(0, 1), (1, 2), (2, 3)]),
        ];
        // row 2 = 2*row 1 and row 4 = row 1 + 3*row 3
        assert_eq!(sparse_rank(rows), 2);
        let rows = vec![mk(&[(0, 1)]), mk(&[(1, 5)]), mk(&[(0, 7), (2, 1)])];
        assert_eq!(sparse_rank(rows), 3);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(23, 3), 1771);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }
}
