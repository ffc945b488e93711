//! Dense exact linear algebra over [`Scalar`].

use num_traits::{One, Zero};

use crate::scalar::Scalar;

pub type Matrix = Vec<Vec<Scalar>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

pub fn n_cols(m: &Matrix, fallback: usize) -> usize {
    m.first().map_or(fallback, Vec::len)
}

pub fn mat_mul(a: &Matrix, b: &Matrix, inner: usize, cols: usize) -> Matrix {
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    let t = &row[k] * &b[k][j];
                    out[i][j] += &t;
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            let mut acc = Scalar::zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc += &(x * y);
                }
            }
            acc
        })
        .collect()
}

/// Reduced row echelon form and pivot columns.
#[allow(clippy::needless_range_loop)]
pub fn rref(m: &Matrix, cols: usize) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix, cols: usize) -> usize {
    rref(m, cols).1.len()
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    let aug: Matrix = m.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    let (red, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}
