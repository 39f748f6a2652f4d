//! Dense integer matrices: Smith and Hermite normal forms, integer kernels,
//! exact determinants and rational inverses.

use crate::arith::{xgcd, Rational};
use num_traits::{One, Zero};

pub type IntMatrix = Vec<Vec<i128>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    let n = a.first().map_or(0, Vec::len);
    (0..n).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Smith normal form `U * M * V = D` with `U`, `V` unimodular and the
/// diagonal of `D` nonnegative with `d_1 | d_2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len)))
            .map(|i| self.d[i][i])
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| **x != 0).count()
    }
}

fn round_div(a: i128, b: i128) -> i128 {
    // nearest integer quotient, keeps entries small during elimination
    let q = a.div_euclid(b);
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        if (r > 0) == (b > 0) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut d = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let swap_rows = |d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize| {
        d.swap(a, b);
        u.swap(a, b);
    };
    let swap_cols = |d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize| {
        for r in d.iter_mut() {
            r.swap(a, b);
        }
        for r in v.iter_mut() {
            r.swap(a, b);
        }
    };

    for t in 0..rows.min(cols) {
        // pivot: smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut d, &mut u, t, pi);
        swap_cols(&mut d, &mut v, t, pj);

        loop {
            let p = d[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                if d[i][t] != 0 {
                    let q = round_div(d[i][t], p);
                    for j in t..cols {
                        d[i][j] -= q * d[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                    if d[i][t] != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if d[t][j] != 0 {
                    let q = round_div(d[t][j], p);
                    for i in t..rows {
                        d[i][j] -= q * d[i][t];
                    }
                    for i in 0..cols {
                        v[i][j] -= q * v[i][t];
                    }
                    if d[t][j] != 0 {
                        clean = false;
                    }
                }
            }
            if !clean {
                // a smaller remainder is now in row or column t; move it to the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    if d[i][t] != 0 && d[i][t].abs() < d[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if d[t][j] != 0 && d[t][j].abs() < d[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    swap_rows(&mut d, &mut u, t, best.0);
                }
                if best.1 != t {
                    swap_cols(&mut d, &mut v, t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| d[i][j] % p != 0);
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        d[t][j] += d[i][j];
                    }
                    for j in 0..rows {
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for j in t..cols {
                d[t][j] = -d[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
    }
    Smith { u, d, v }
}

/// A basis (as columns) of the integer kernel `{x : A x = 0}`.
pub fn integer_kernel(a: &IntMatrix, cols: usize) -> Vec<Vec<i128>> {
    if a.is_empty() {
        return identity(cols);
    }
    let s = smith_normal_form(a);
    let r = s.rank();
    (r..cols)
        .map(|j| (0..cols).map(|i| s.v[i][j]).collect())
        .collect()
}

/// Row-style Hermite basis of a full-rank sublattice of `Z^k`, built by
/// inserting generators one at a time. The lattice must contain `n * Z^k`
/// for the seed value `n`.
#[derive(Debug, Clone)]
pub struct RowHermite {
    rows: IntMatrix,
}

impl RowHermite {
    pub fn with_seed(k: usize, n: i128) -> Self {
        let mut rows = identity(k);
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = n;
        }
        RowHermite { rows }
    }

    pub fn insert(&mut self, mut v: Vec<i128>) {
        let k = self.rows.len();
        for i in 0..k {
            if v[i] == 0 {
                continue;
            }
            let r = &self.rows[i];
            let (g, s, t) = xgcd(r[i], v[i]);
            let (ri, vi) = (r[i] / g, v[i] / g);
            let new_r: Vec<i128> = (0..k).map(|j| s * r[j] + t * v[j]).collect();
            let new_v: Vec<i128> = (0..k).map(|j| ri * v[j] - vi * r[j]).collect();
            self.rows[i] = new_r;
            v = new_v;
        }
        self.size_reduce();
    }

    fn size_reduce(&mut self) {
        let k = self.rows.len();
        for i in (0..k).rev() {
            if self.rows[i][i] < 0 {
                for x in self.rows[i].iter_mut() {
                    *x = -*x;
                }
            }
            for j in i + 1..k {
                let q = self.rows[i][j].div_euclid(self.rows[j][j]);
                if q != 0 {
                    let rj = self.rows[j].clone();
                    for (x, y) in self.rows[i].iter_mut().zip(&rj) {
                        *x -= q * y;
                    }
                }
            }
        }
    }

    pub fn rows(&self) -> &IntMatrix {
        &self.rows
    }
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Inverse over the rationals; `None` when singular.
pub fn rational_inverse(m: &IntMatrix) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Rational> = r.iter().map(|&x| Rational::from_integer(x)).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let pv = a[c][c];
        for x in a[c].iter_mut() {
            *x /= pv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c];
                let rc = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(&rc) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
