//! Exact linear algebra over the integers and rationals.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divides by the gcd of the entries. The zero vector is returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators and returns the primitive integer vector on the same ray.
pub fn primitive_from_rational(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    primitive(&scaled)
}

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Reduces `rows` to row echelon form in place and returns the pivot columns.
fn echelon(rows: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (head, tail) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&mut a[i], &b[0])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&mut b[0], &a[r])
                };
                for (x, y) in head.iter_mut().zip(tail) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let ncols = first.len();
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| to_rational(r)).collect();
    echelon(&mut m, ncols).len()
}

/// Solves `A x = b` where `A` is given by rows. Returns `None` if inconsistent;
/// free variables are set to zero.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut m, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = m[row][ncols].clone();
    }
    Some(x)
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = &d * &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let v = &a[c][j] * &f;
                a[i][j] = &a[i][j] - v;
            }
        }
    }
    d
}

pub fn abs_det(m: &[Vec<BigInt>]) -> BigInt {
    det(m).abs()
}

/// Inverse of a square rational matrix, or `None` when singular.
pub fn inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let pivots = echelon(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{ints, rat};

    #[test]
    fn bareiss_matches_rational_elimination() {
        let m = vec![ints(&[2, -1, 0]), ints(&[1, 3, 4]), ints(&[0, 5, -2])];
        let q: Vec<Vec<BigRational>> = m.iter().map(|r| to_rational(r)).collect();
        assert_eq!(BigRational::from_integer(det(&m)), det_rational(&q));
        assert_eq!(det(&m), BigInt::from(-54));
    }

    #[test]
    fn det_with_zero_pivot() {
        let m = vec![ints(&[0, 1]), ints(&[1, 0])];
        assert_eq!(det(&m), BigInt::from(-1));
        let s = vec![ints(&[1, 2]), ints(&[2, 4])];
        assert!(det(&s).is_zero());
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
        assert_eq!(solve(&a, &[rat(1, 1), rat(1, 1), rat(2, 1)]), Some(vec![rat(1, 1), rat(1, 1)]));
        assert_eq!(solve(&a, &[rat(1, 1), rat(1, 1), rat(3, 1)]), None);
    }

    #[test]
    fn primitive_and_rank() {
        assert_eq!(primitive(&ints(&[4, -6, 2])), ints(&[2, -3, 1]));
        assert_eq!(primitive_from_rational(&[rat(1, 2), rat(3, 4)]), ints(&[2, 3]));
        assert_eq!(rank(&[ints(&[1, 2, 3]), ints(&[2, 4, 6]), ints(&[0, 1, 0])]), 2);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![rat(1, 1), rat(-1, 1)], vec![rat(-1, 1), rat(2, 1)]]);
        assert!(inverse(&[vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]]).is_none());
    }
}
