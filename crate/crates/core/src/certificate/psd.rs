use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{int, Rational};

/// Outcome of an exact positive semidefiniteness test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PsdCheck {
    /// `M = L D L^T` with `L` unit lower triangular and `D >= 0` diagonal.
    Psd { l: Matrix, d: Vec<Rational> },
    /// A vector with `v^T M v < 0`.
    NotPsd { witness: Vec<Rational> },
}

impl PsdCheck {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdCheck::Psd { .. })
    }
}

/// Decides `M ⪰ 0` exactly by symmetric elimination. A zero pivot must sit
/// on an all-zero row; a negative pivot or a zero pivot with a nonzero row
/// yields a negative direction, lifted back to the original coordinates.
pub fn psd_check_exact(m: &Matrix) -> Result<PsdCheck> {
    if !linalg::is_symmetric(m) {
        return Err(Error::Dimension("PSD check needs a square symmetric matrix".into()));
    }
    let n = m.len();
    let mut a = m.clone();
    let mut l = linalg::identity(n);
    let mut d = vec![Rational::zero(); n];

    let lift = |mut v: Vec<Rational>, level: usize, l: &Matrix, d: &[Rational]| -> Vec<Rational> {
        for p in (0..level).rev() {
            if d[p].is_zero() {
                continue;
            }
            let s: Rational = (p + 1..n).filter(|&j| !v[j].is_zero()).map(|j| &l[j][p] * &v[j]).sum();
            v[p] = -s;
        }
        v
    };

    for i in 0..n {
        let pivot = a[i][i].clone();
        if pivot.is_negative() {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            return Ok(PsdCheck::NotPsd { witness: lift(v, i, &l, &d) });
        }
        if pivot.is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                // (t e_i + e_j)^T S (t e_i + e_j) = a_jj + 2 t a_ij = -1
                let t = -(&a[j][j] + Rational::one()) / (int(2) * &a[i][j]);
                let mut v = vec![Rational::zero(); n];
                v[i] = t;
                v[j] = Rational::one();
                return Ok(PsdCheck::NotPsd { witness: lift(v, i, &l, &d) });
            }
            continue;
        }
        for r in i + 1..n {
            l[r][i] = &a[r][i] / &pivot;
        }
        for r in i + 1..n {
            if a[i][r].is_zero() {
                continue;
            }
            for c in i + 1..n {
                if !a[i][c].is_zero() {
                    let delta = &l[r][i] * &a[i][c];
                    a[r][c] -= delta;
                }
            }
        }
        d[i] = pivot;
    }
    Ok(PsdCheck::Psd { l, d })
}
