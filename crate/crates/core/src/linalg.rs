//! Dense linear algebra over exact fields.

use num_traits::{One, Zero};

use crate::arith::{Rat, RationalFunc};
use crate::error::{Error, Result};

/// The little bit of field structure the solvers need.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
}

impl Field for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl Field for RationalFunc {
    fn zero() -> Self {
        RationalFunc::zero()
    }
    fn one() -> Self {
        RationalFunc::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        RationalFunc::inv(self).expect("pivot is nonzero")
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

/// Inverse of a square matrix by Gauss-Jordan elimination.
pub fn invert<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>> {
    let n = m.len();
    let mut a: Matrix<F> = m.clone();
    let mut inv: Matrix<F> =
        (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or_else(|| Error::Internal("singular matrix".into()))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].inv();
        if !(p == F::one()) {
            for j in 0..n {
                if !a[col][j].is_zero() {
                    a[col][j] = a[col][j].mul(&p);
                }
                if !inv[col][j].is_zero() {
                    inv[col][j] = inv[col][j].mul(&p);
                }
            }
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                if !a[col][j].is_zero() {
                    a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                }
                if !inv[col][j].is_zero() {
                    inv[r][j] = inv[r][j].sub(&f.mul(&inv[col][j]));
                }
            }
        }
    }
    Ok(inv)
}

/// Solve `m x = b` for square nonsingular `m`.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Result<Vec<F>> {
    let n = m.len();
    let mut a: Matrix<F> = m.iter().zip(b).map(|(row, x)| {
        let mut r = row.clone();
        r.push(x.clone());
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or_else(|| Error::Internal("singular system".into()))?;
        a.swap(col, piv);
        let p = a[col][col].inv();
        for j in col..=n {
            if !a[col][j].is_zero() {
                a[col][j] = a[col][j].mul(&p);
            }
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..=n {
                if !a[col][j].is_zero() {
                    a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                }
            }
        }
    }
    Ok(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Inverse of an upper unitriangular matrix (ones on the diagonal, zeros below).
pub fn invert_unitriangular<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>> {
    let n = m.len();
    for i in 0..n {
        if !(m[i][i] == F::one()) || (0..i).any(|j| !m[i][j].is_zero()) {
            return Err(Error::Internal("matrix is not upper unitriangular".into()));
        }
    }
    let mut inv: Matrix<F> = vec![vec![F::zero(); n]; n];
    for i in (0..n).rev() {
        inv[i][i] = F::one();
        for j in i + 1..n {
            let mut s = F::zero();
            for k in i + 1..=j {
                if !m[i][k].is_zero() && !inv[k][j].is_zero() {
                    s = s.add(&m[i][k].mul(&inv[k][j]));
                }
            }
            inv[i][j] = F::zero().sub(&s);
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, IntPoly};

    #[test]
    fn rational_inverse() {
        let m = vec![vec![int(2), int(1)], vec![int(5), int(3)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![int(3), int(-1)], vec![int(-5), int(2)]]);
        let x = solve(&m, &[int(1), int(0)]).unwrap();
        assert_eq!(x, vec![int(3), int(-5)]);
        assert!(invert(&vec![vec![int(1), int(2)], vec![int(2), int(4)]]).is_err());
    }

    #[test]
    fn rational_function_solve() {
        let t = RationalFunc::t();
        let one = RationalFunc::one();
        let m = vec![vec![one.clone(), t.clone()], vec![t.clone(), one.clone()]];
        let x = solve(&m, &[one.clone(), RationalFunc::zero()]).unwrap();
        let den = RationalFunc::from_poly(IntPoly::from_ints(&[1, 0, -1]));
        assert_eq!(x[0], &one / &den);
        assert_eq!(x[1], &(-&t) / &den);
    }

    #[test]
    fn unitriangular_inverse() {
        let m = vec![
            vec![int(1), int(2), rat(1, 2)],
            vec![int(0), int(1), int(3)],
            vec![int(0), int(0), int(1)],
        ];
        let inv = invert_unitriangular(&m).unwrap();
        assert_eq!(inv, invert(&m).unwrap());
    }
}
