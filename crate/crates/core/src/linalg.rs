//! Dense matrices over F_p: reduced echelon form, rank, kernels, affine solves.

use crate::gf::Fp;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Outcome of an affine solve `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// Particular solution (free variables set to zero) and a kernel basis.
    Consistent { particular: Vec<u64>, kernel: Vec<Vec<u64>> },
    /// Index of an original equation that cannot be satisfied.
    Inconsistent { row: usize },
}

impl Matrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(field: Fp, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row.into_iter().map(|v| v % field.modulus()));
        }
        Matrix { field, rows: r, cols: c, data }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[u64]) {
        if self.rows == 0 && self.cols == 0 {
            self.cols = row.len();
        }
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row echelon form; returns pivot columns.
    /// `track` receives the row permutation so callers can name original rows.
    fn rref_tracking(&mut self, track: &mut [usize]) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            track.swap(r, pr);
            let inv = f.inv(self.get(r, c)).unwrap();
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&mut self) -> Vec<usize> {
        let mut track: Vec<usize> = (0..self.rows).collect();
        self.rref_tracking(&mut track)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel, one vector per free column with a 1 there.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u64; self.cols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(i, fc));
                }
                v
            })
            .collect()
    }

    /// Solve `self * x = b`.
    pub fn solve(&self, b: &[u64]) -> Solution {
        assert_eq!(b.len(), self.rows);
        let f = self.field;
        let mut aug = Matrix::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i] % f.modulus());
        }
        let mut track: Vec<usize> = (0..self.rows).collect();
        let pivots = aug.rref_tracking(&mut track);
        if let Some(pos) = pivots.iter().position(|&c| c == self.cols) {
            return Solution::Inconsistent { row: track[pos] };
        }
        let mut particular = vec![0u64; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            particular[pc] = aug.get(i, self.cols);
        }
        Solution::Consistent { particular, kernel: self.kernel() }
    }

    pub fn det(&self) -> u64 {
        assert_eq!(self.rows, self.cols);
        let f = self.field;
        let mut m = self.clone();
        let mut det = 1u64;
        for c in 0..m.cols {
            let Some(pr) = (c..m.rows).find(|&i| m.get(i, c) != 0) else {
                return 0;
            };
            if pr != c {
                m.swap_rows(c, pr);
                det = f.neg(det);
            }
            let piv = m.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv).unwrap();
            for i in c + 1..m.rows {
                let factor = f.mul(m.get(i, c), inv);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let f = self.field;
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }
}

/// Rank of a dense matrix given by rows, using delayed modular reduction.
///
/// Suitable for the large, mostly-dense Macaulay matrices of Hilbert function
/// computations; requires p < 2^31.
pub fn rank_of_rows(field: Fp, mut rows: Vec<Vec<u64>>) -> usize {
    let p = field.modulus();
    assert!(p < 1 << 31, "rank_of_rows needs p < 2^31");
    let cols = rows.first().map_or(0, |r| r.len());
    let p2 = p * p;
    // number of unreduced updates a u64 entry can absorb
    let budget = (u64::MAX / p2).saturating_sub(1).max(1);
    let mut since_reduce = 0u64;
    let mut rank = 0usize;
    for c in 0..cols {
        if since_reduce >= budget {
            for r in rows[rank..].iter_mut() {
                r[c..].iter_mut().for_each(|x| *x %= p);
            }
            since_reduce = 0;
        }
        let Some(k) = (rank..rows.len()).find(|&i| rows[i][c] % p != 0) else {
            continue;
        };
        rows.swap(rank, k);
        let mut piv = std::mem::take(&mut rows[rank]);
        piv[c..].iter_mut().for_each(|x| *x %= p);
        let inv = field.inv(piv[c]).expect("nonzero pivot");
        piv[c..].iter_mut().for_each(|x| *x = *x * inv % p);
        for r in rows[rank + 1..].iter_mut() {
            let v = r[c] % p;
            if v == 0 {
                r[c] = 0;
                continue;
            }
            let m = p - v;
            for (x, &y) in r[c..].iter_mut().zip(&piv[c..]) {
                *x += m * y;
            }
        }
        rows[rank] = piv;
        since_reduce += 1;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_rank() {
        let f = Fp::new(7).unwrap();
        let m = Matrix::from_rows(f, vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|&x| x == 0));
        assert_eq!(m.det(), 0);
    }

    #[test]
    fn solve_reports_bad_row() {
        let f = Fp::new(11).unwrap();
        let m = Matrix::from_rows(f, vec![vec![1, 1], vec![2, 2]]);
        assert_eq!(m.solve(&[1, 3]), Solution::Inconsistent { row: 1 });
        match m.solve(&[1, 2]) {
            Solution::Consistent { particular, kernel } => {
                assert_eq!(m.mul_vec(&particular), vec![1, 2]);
                assert_eq!(kernel.len(), 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn det_small() {
        let f = Fp::new(101).unwrap();
        let m = Matrix::from_rows(f, vec![vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        // 2(12-1) - 1(4-0) = 18
        assert_eq!(m.det(), 18);
    }

    #[test]
    fn delayed_rank_matches_rref() {
        use rand::{Rng, SeedableRng};
        let f = Fp::new(10007).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (r, c, k) in [(30, 20, 12), (15, 40, 15), (50, 50, 33)] {
            // product of random r x k and k x c matrices has rank k
            let a: Vec<Vec<u64>> = (0..r).map(|_| (0..k).map(|_| rng.gen_range(0..10007)).collect()).collect();
            let b: Vec<Vec<u64>> = (0..k).map(|_| (0..c).map(|_| rng.gen_range(0..10007)).collect()).collect();
            let prod: Vec<Vec<u64>> = a
                .iter()
                .map(|row| (0..c).map(|j| (0..k).fold(0, |acc, t| f.add(acc, f.mul(row[t], b[t][j])))).collect())
                .collect();
            let slow = Matrix::from_rows(f, prod.clone()).rank();
            assert_eq!(rank_of_rows(f, prod), slow);
            assert_eq!(slow, k);
        }
    }
}
