//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Row-major dense rational matrix.
pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn is_symmetric(m: &Matrix) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n) && (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Rational::zero(), |acc, t| acc + &row[t] * &b[t][j]))
                .collect()
        })
        .collect()
}

/// `v^T m v`.
pub fn quadratic(m: &Matrix, v: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (i, row) in m.iter().enumerate() {
        if v[i].is_zero() {
            continue;
        }
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() && !v[j].is_zero() {
                acc += &v[i] * x * &v[j];
            }
        }
    }
    acc
}

/// In-place reduced row echelon form with first-nonzero pivoting. Returns the
/// pivot columns; zero rows are removed.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut copy = m.clone();
    rref(&mut copy).len()
}

/// Nonzero rows of the reduced echelon form: a canonical basis of the row space.
pub fn row_space(m: &Matrix) -> Matrix {
    let mut copy = m.clone();
    rref(&mut copy);
    copy
}

/// Basis of `{x : m x = 0}` for a matrix with `cols` columns, returned in
/// reduced echelon form.
pub fn kernel(m: &Matrix, cols: usize) -> Matrix {
    let mut red = m.clone();
    let pivots = rref(&mut red);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in red.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    row_space(&basis)
}
