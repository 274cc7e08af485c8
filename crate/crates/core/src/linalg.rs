//! Exact linear algebra on small symmetric integer matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Inertia `(positive, negative, zero)` of a symmetric integer matrix, by
/// rational congruence diagonalization.
pub fn inertia(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        // bring a nonzero diagonal entry to position k
        let diag = (k..n).find(|&i| !a[i][i].is_zero());
        let pivot = match diag {
            Some(i) => i,
            None => {
                let off = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
                match off {
                    None => break,
                    Some((i, j)) => {
                        // row/col i += row/col j makes a[i][i] = 2 a[i][j]
                        for c in 0..n {
                            let v = a[j][c].clone();
                            a[i][c] += v;
                        }
                        for r in 0..n {
                            let v = a[r][j].clone();
                            a[r][i] += v;
                        }
                        i
                    }
                }
            }
        };
        a.swap(k, pivot);
        for row in a.iter_mut() {
            row.swap(k, pivot);
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for c in k..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for r in k..n {
                let v = &f * &a[r][k];
                a[r][i] -= v;
            }
        }
        k += 1;
    }
    (pos, neg, n - pos - neg)
}

pub fn signature(m: &[Vec<i64>]) -> i64 {
    let (p, q, _) = inertia(m);
    p as i64 - q as i64
}

pub fn nullity(m: &[Vec<i64>]) -> usize {
    inertia(m).2
}

/// Fraction-free determinant (Bareiss).
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone() * sign
}
