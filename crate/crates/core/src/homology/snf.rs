//! Dense integer matrices and Smith normal form.
//!
//! Everything is exact `i128` arithmetic with checked operations; the
//! matrices in this crate are boundary maps of complexes with at most a few
//! dozen cells, so overflow means a bug, not a size problem.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    a: Vec<i128>,
}

impl core::fmt::Debug for IMat {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "{}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.at(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn checked_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("integer overflow in matrix arithmetic")
}

fn checked_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow in matrix arithmetic")
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> IMat {
        IMat { rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> IMat {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = 1;
        }
        m
    }

    pub fn from_rows(rows: &[&[i128]]) -> IMat {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = IMat::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &x) in row.iter().enumerate() {
                *m.at_mut(i, j) = x;
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> i128 {
        self.a[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut i128 {
        &mut self.a[i * self.cols + j]
    }

    pub fn mul(&self, rhs: &IMat) -> IMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.at(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = checked_add(out.at(i, j), checked_mul(x, rhs.at(k, j)));
                    *out.at_mut(i, j) = t;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.a.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.a.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[a] += q * row[b]
    fn add_row(&mut self, a: usize, b: usize, q: i128) {
        for j in 0..self.cols {
            let t = checked_add(self.at(a, j), checked_mul(q, self.at(b, j)));
            *self.at_mut(a, j) = t;
        }
    }

    /// col[a] += q * col[b]
    fn add_col(&mut self, a: usize, b: usize, q: i128) {
        for i in 0..self.rows {
            let t = checked_add(self.at(i, a), checked_mul(q, self.at(i, b)));
            *self.at_mut(i, a) = t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            *self.at_mut(a, j) = -self.at(a, j);
        }
    }

    /// Determinant by fraction-free elimination. Square matrices only.
    pub fn det(&self) -> i128 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut m = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m.at(k, k) == 0 {
                match (k + 1..n).find(|&i| m.at(i, k) != 0) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = checked_add(
                        checked_mul(m.at(k, k), m.at(i, j)),
                        -checked_mul(m.at(i, k), m.at(k, j)),
                    );
                    *m.at_mut(i, j) = t / prev;
                }
                *m.at_mut(i, k) = 0;
            }
            prev = m.at(k, k);
        }
        sign * m.at(n - 1, n - 1)
    }
}

/// Smith normal form `u * b * v = d` with unimodular `u`, `v` and diagonal
/// `d`, each diagonal entry nonnegative and dividing the next.
pub struct Snf {
    pub d: IMat,
    pub u: IMat,
    pub v: IMat,
    /// The nonzero diagonal entries.
    pub factors: Vec<i128>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Nontrivial invariant factors (those greater than 1).
    pub fn torsion(&self) -> Vec<i128> {
        self.factors.iter().copied().filter(|&d| d > 1).collect()
    }
}

pub fn snf(b: &IMat) -> Snf {
    let mut d = b.clone();
    let mut u = IMat::identity(b.rows);
    let mut v = IMat::identity(b.cols);
    let size = b.rows.min(b.cols);

    for k in 0..size {
        if !move_pivot(&mut d, &mut u, &mut v, k) {
            break;
        }
        loop {
            // clear column k with row operations, keeping the smallest
            // remainder as the new pivot
            let mut dirty = false;
            for i in k + 1..d.rows {
                let x = d.at(i, k);
                if x == 0 {
                    continue;
                }
                let p = d.at(k, k);
                let q = x / p;
                if q != 0 {
                    d.add_row(i, k, -q);
                    u.add_row(i, k, -q);
                }
                if d.at(i, k) != 0 {
                    d.swap_rows(i, k);
                    u.swap_rows(i, k);
                    dirty = true;
                }
            }
            for j in k + 1..d.cols {
                let x = d.at(k, j);
                if x == 0 {
                    continue;
                }
                let p = d.at(k, k);
                let q = x / p;
                if q != 0 {
                    d.add_col(j, k, -q);
                    v.add_col(j, k, -q);
                }
                if d.at(k, j) != 0 {
                    d.swap_cols(j, k);
                    v.swap_cols(j, k);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: the pivot must divide everything that remains
            let p = d.at(k, k);
            let offender = (k + 1..d.rows)
                .flat_map(|i| (k + 1..d.cols).map(move |j| (i, j)))
                .find(|&(i, j)| d.at(i, j) % p != 0);
            match offender {
                Some((i, _)) => {
                    d.add_row(k, i, 1);
                    u.add_row(k, i, 1);
                }
                None => break,
            }
        }
        if d.at(k, k) < 0 {
            d.negate_row(k);
            u.negate_row(k);
        }
    }

    let factors = (0..size).map(|k| d.at(k, k)).take_while(|&x| x != 0).collect();
    Snf { d, u, v, factors }
}

/// Moves a nonzero entry of smallest magnitude in the trailing submatrix to
/// `(k, k)`. Returns false when the submatrix is zero.
fn move_pivot(d: &mut IMat, u: &mut IMat, v: &mut IMat, k: usize) -> bool {
    let mut best: Option<(usize, usize)> = None;
    for i in k..d.rows {
        for j in k..d.cols {
            let x = d.at(i, j).unsigned_abs();
            if x != 0 && best.map_or(true, |(bi, bj)| x < d.at(bi, bj).unsigned_abs()) {
                best = Some((i, j));
            }
        }
    }
    let Some((i, j)) = best else { return false };
    d.swap_rows(i, k);
    u.swap_rows(i, k);
    d.swap_cols(j, k);
    v.swap_cols(j, k);
    true
}

/// Rank of a matrix over the field with two elements. Rows are bit masks;
/// at most 64 columns.
pub fn rank_z2(rows: &[u64]) -> usize {
    let mut pivot = [0u64; 64];
    let mut rank = 0;
    for &row in rows {
        let mut r = row;
        while r != 0 {
            let h = 63 - r.leading_zeros() as usize;
            if pivot[h] == 0 {
                pivot[h] = r;
                rank += 1;
                break;
            }
            r ^= pivot[h];
        }
    }
    rank
}
