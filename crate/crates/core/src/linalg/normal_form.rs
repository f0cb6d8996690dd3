//! Hermite and Smith normal forms over the integers.
//!
//! Convention (used everywhere in the crate): the Hermite form is row-style.
//! `H = U·M` with `U` unimodular, nonzero rows first, each pivot positive and
//! strictly to the right of the pivot above it, and every entry above a pivot
//! reduced into `[0, pivot)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntegerMatrix;

/// Result of [`hnf`]: `h = u · input`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hermite {
    pub h: IntegerMatrix,
    pub u: IntegerMatrix,
    /// Number of nonzero rows of `h`.
    pub rank: usize,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

/// Result of [`snf`]: `diag(factors) = u · input · v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    /// `min(rows, cols)` diagonal entries, non-negative, each dividing the next,
    /// zeros last.
    pub factors: Vec<BigInt>,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

/// Extended gcd with a non-negative gcd: returns `(g, x, y)` with `x·a + y·b = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Row-style Hermite normal form with the transforming matrix.
pub fn hnf(m: &IntegerMatrix) -> Hermite {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h.get(i, c).is_zero() {
                continue;
            }
            let a = h.get(r, c).clone();
            let b = h.get(i, c).clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let z = -(&b / &g);
            let w = &a / &g;
            h.combine_rows(r, i, &x, &y, &z, &w);
            u.combine_rows(r, i, &x, &y, &z, &w);
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&pivot);
            if !q.is_zero() {
                let k = -q;
                h.add_row_multiple(i, r, &k);
                u.add_row_multiple(i, r, &k);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Hermite { h, u, rank: r, pivots }
}

/// Smith normal form with both transforming matrices.
pub fn snf(m: &IntegerMatrix) -> Smith {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);
    let diag = rows.min(cols);

    for t in 0..diag {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize, BigInt)> = None;
            for i in t..rows {
                for j in t..cols {
                    let e = a.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    let abs = e.abs();
                    if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                        best = Some((i, j, abs));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                break;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = a.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    let k = -q;
                    a.add_row_multiple(i, t, &k);
                    u.add_row_multiple(i, t, &k);
                }
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = a.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    let k = -q;
                    a.add_col_multiple(j, t, &k);
                    v.add_col_multiple(j, t, &k);
                }
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility by pulling in an offending row.
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    let factors = (0..diag).map(|t| a.get(t, t).clone()).collect();
    Smith { factors, u, v }
}

/// Inverse of a unimodular matrix, via the Hermite form of `[M | I]`.
///
/// Returns `None` if `m` is not square or not unimodular.
pub fn unimodular_inverse(m: &IntegerMatrix) -> Option<IntegerMatrix> {
    if !m.is_square() {
        return None;
    }
    let herm = hnf(m);
    // H = U·M; M unimodular iff H = I, in which case U = M⁻¹.
    herm.h.is_identity().then_some(herm.u)
}

/// Absolute determinant of a square matrix (product of invariant factors).
pub fn abs_det(m: &IntegerMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    snf(m).factors.iter().fold(BigInt::one(), |acc, d| acc * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_i64(rows)
    }

    fn assert_unimodular(u: &IntegerMatrix) {
        assert!(unimodular_inverse(u).is_some(), "not unimodular: {u}");
    }

    #[test]
    fn hnf_identity() {
        let r = hnf(&IntegerMatrix::identity(3));
        assert_eq!(r.h, IntegerMatrix::identity(3));
        assert_eq!(r.u, IntegerMatrix::identity(3));
    }

    #[test]
    fn hnf_two_by_two() {
        let input = m(&[&[1, 2], &[3, 4]]);
        let r = hnf(&input);
        assert_eq!(r.h, m(&[&[1, 0], &[0, 2]]));
        assert_eq!(r.u.mul(&input).unwrap(), r.h);
        assert_unimodular(&r.u);
    }

    #[test]
    fn hnf_single_row_is_fixed() {
        let r = hnf(&m(&[&[2, 4]]));
        assert_eq!(r.h, m(&[&[2, 4]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn hnf_rank_deficient_puts_zero_rows_last() {
        let input = m(&[&[0, 0, 0], &[2, 4, 6], &[1, 2, 3]]);
        let r = hnf(&input);
        assert_eq!(r.rank, 1);
        assert_eq!(r.h, m(&[&[1, 2, 3], &[0, 0, 0], &[0, 0, 0]]));
        assert_eq!(r.u.mul(&input).unwrap(), r.h);
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let r = hnf(&m(&[&[1, 5], &[0, 3]]));
        assert_eq!(r.h, m(&[&[1, 2], &[0, 3]]));
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(&IntegerMatrix::identity(2)).factors, big(&[1, 1]));
        assert_eq!(snf(&m(&[&[2, 4], &[6, 8]])).factors, big(&[2, 4]));
        assert_eq!(snf(&IntegerMatrix::zeros(2, 2)).factors, big(&[0, 0]));
    }

    #[test]
    fn snf_transforms_are_exact() {
        let input = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = snf(&input);
        let d = s.u.mul(&input).unwrap().mul(&s.v).unwrap();
        assert_eq!(d, IntegerMatrix::diagonal(&s.factors));
        assert_eq!(s.factors, big(&[2, 6, 12]));
        assert_unimodular(&s.u);
        assert_unimodular(&s.v);
    }

    #[test]
    fn snf_rectangular() {
        let s = snf(&m(&[&[2, 0, 0], &[0, 3, 0]]));
        assert_eq!(s.factors, big(&[1, 6]));
    }

    #[test]
    fn inverse_and_det() {
        let u = m(&[&[2, 1], &[1, 1]]);
        let inv = unimodular_inverse(&u).unwrap();
        assert!(inv.mul(&u).unwrap().is_identity());
        assert!(unimodular_inverse(&m(&[&[2, 0], &[0, 1]])).is_none());
        assert_eq!(abs_det(&m(&[&[2, 4], &[6, 8]])), BigInt::from(8));
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        super::super::big_vec(v)
    }
}
