//! Smith normal form over the integers with column-transform tracking.
//!
//! For an `m x n` matrix `R` we find unimodular `U`, `V` with `U R V = D`
//! diagonal. Only `V` and `V^-1` are kept: the right kernel of `R` is spanned
//! by the last `n - rank` columns of `V`, and the matching rows of `V^-1` give
//! coordinates in that basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero invariant factors, positive, each dividing the next.
    pub invariants: Vec<BigInt>,
    pub rank: usize,
    pub cols: usize,
    /// Column transform `V` (`n x n`).
    pub v: Vec<Vec<BigInt>>,
    /// `V^-1`.
    pub v_inv: Vec<Vec<BigInt>>,
}

impl SmithForm {
    /// Basis of the integer right kernel, as column vectors of length `cols`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank..self.cols)
            .map(|j| self.v.iter().map(|row| row[j].clone()).collect())
            .collect()
    }

    /// Coordinates of a kernel vector in [`kernel_basis`](Self::kernel_basis).
    pub fn kernel_coordinates(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.v_inv[self.rank..]
            .iter()
            .map(|row| dot(row, x))
            .collect()
    }

    /// Invariant factors greater than one: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariants
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Work {
    a: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// `col_j -= q * col_i`
    fn sub_col(&mut self, j: usize, i: usize, q: &BigInt) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            let t = &row[i] * q;
            row[j] -= t;
        }
        let src = self.v_inv[j].clone();
        for (x, s) in self.v_inv[i].iter_mut().zip(&src) {
            *x += s * q;
        }
    }

    fn negate_col(&mut self, i: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row[i] = -&row[i];
        }
        for x in self.v_inv[i].iter_mut() {
            *x = -&*x;
        }
    }

    /// `row_j -= q * row_i`
    fn sub_row(&mut self, j: usize, i: usize, q: &BigInt) {
        let src = self.a[i].clone();
        for (x, s) in self.a[j].iter_mut().zip(&src) {
            *x -= s * q;
        }
    }
}

/// Smith normal form of an `m x cols` matrix given by rows.
pub fn smith_form(rows: &[Vec<BigInt>], cols: usize) -> SmithForm {
    let m = rows.len();
    let identity = |n: usize| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect())
            .collect()
    };
    let mut w = Work {
        a: rows.to_vec(),
        v: identity(cols),
        v_inv: identity(cols),
    };
    debug_assert!(w.a.iter().all(|r| r.len() == cols));
    let mut t = 0;
    while t < m.min(cols) {
        // smallest nonzero entry of the remaining block becomes the pivot
        let pivot = (t..m)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !w.a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| w.a[i][j].abs().cmp(&w.a[k][l].abs()));
        let Some((pi, pj)) = pivot else { break };
        w.a.swap(t, pi);
        w.swap_cols(t, pj);
        loop {
            let p = w.a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&p);
                    w.sub_row(i, t, &q);
                    dirty |= !w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&p);
                    w.sub_col(j, t, &q);
                    dirty |= !w.a[t][j].is_zero();
                }
            }
            if dirty {
                // a smaller remainder appeared in the pivot row or column
                let (i, j) = (t..m)
                    .map(|i| (i, t))
                    .chain((t..cols).map(|j| (t, j)))
                    .filter(|&(i, j)| !w.a[i][j].is_zero())
                    .min_by(|&(i, j), &(k, l)| w.a[i][j].abs().cmp(&w.a[k][l].abs()))
                    .unwrap();
                w.a.swap(t, i);
                w.swap_cols(t, j);
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offender =
                (t + 1..m).find(|&i| (t + 1..cols).any(|j| !(&w.a[i][j] % &p).is_zero()));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    w.sub_row(t, i, &minus_one);
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_col(t);
        }
        t += 1;
    }
    let invariants = (0..t).map(|i| w.a[i][i].clone()).collect();
    SmithForm {
        invariants,
        rank: t,
        cols,
        v: w.v,
        v_inv: w.v_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn khramtsov_relators() {
        // a^4 b^-2 and [b, t] over (a, b, t)
        let s = smith_form(&big(&[&[4, -2, 0], &[0, 0, 0]]), 3);
        assert_eq!(s.rank, 1);
        assert_eq!(ints(&s.invariants), vec![2]);
        assert_eq!(s.kernel_basis().len(), 2);
    }

    #[test]
    fn known_invariants() {
        let s = smith_form(&big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3);
        assert_eq!(ints(&s.invariants), vec![2, 6, 12]);
        assert!(s.kernel_basis().is_empty());
        let z = smith_form(&big(&[&[0, 0], &[0, 0]]), 2);
        assert_eq!(z.rank, 0);
        assert_eq!(z.kernel_basis().len(), 2);
    }

    fn check(rows: &[Vec<BigInt>], cols: usize) {
        let s = smith_form(rows, cols);
        for (i, row) in s.v.iter().enumerate() {
            for j in 0..cols {
                let e: BigInt = dot(
                    row,
                    &s.v_inv.iter().map(|r| r[j].clone()).collect::<Vec<_>>(),
                );
                assert_eq!(e, BigInt::from((i == j) as u8));
            }
        }
        for k in s.kernel_basis() {
            for r in rows {
                assert!(dot(r, &k).is_zero());
            }
        }
        for w in s.invariants.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        // rank over Q by plain fraction-free elimination
        assert_eq!(s.rank, rational_rank(rows, cols));
        // coordinates invert the basis expansion
        let basis = s.kernel_basis();
        for (idx, k) in basis.iter().enumerate() {
            let c = s.kernel_coordinates(k);
            for (j, x) in c.iter().enumerate() {
                assert_eq!(*x, BigInt::from((j == idx) as u8));
            }
        }
    }

    fn rational_rank(rows: &[Vec<BigInt>], cols: usize) -> usize {
        let mut a = rows.to_vec();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..a.len() {
                let (x, y) = (a[r][c].clone(), a[i][c].clone());
                let pivot = a[r].clone();
                for (v, pv) in a[i].iter_mut().zip(&pivot) {
                    *v = &*v * &x - pv * &y;
                }
            }
            r += 1;
        }
        r
    }

    proptest! {
        #[test]
        fn transforms_are_consistent(
            m in 1usize..5,
            n in 1usize..5,
            entries in proptest::collection::vec(-6i64..7, 25),
        ) {
            let rows: Vec<Vec<BigInt>> = (0..m)
                .map(|i| (0..n).map(|j| BigInt::from(entries[i * 5 + j])).collect())
                .collect();
            check(&rows, n);
        }
    }
}
