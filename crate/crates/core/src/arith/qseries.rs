use num_traits::One;

use super::{IntPoly, Rat};
use crate::error::{Error, Result};

/// `phi_n(t) = (1 - t)(1 - t^2)...(1 - t^n)`.
pub fn phi(n: usize) -> IntPoly {
    let mut acc = IntPoly::one();
    for k in 1..=n {
        acc = &acc * &(&IntPoly::one() - &IntPoly::monomial(Rat::one(), k));
    }
    acc
}

/// `phi_r / (phi_a * phi_{r-a})`, checked to divide exactly.
pub fn gauss_binomial(r: usize, a: usize) -> Result<IntPoly> {
    if a > r {
        return Err(Error::InvalidArgument(format!("gauss_binomial: a = {a} exceeds r = {r}")));
    }
    q_factorial_ratio(r, &[a, r - a])
}

/// `phi_r / prod_i phi_{parts_i}`, checked to divide exactly.
pub fn q_factorial_ratio(r: usize, parts: &[usize]) -> Result<IntPoly> {
    let den = parts.iter().fold(IntPoly::one(), |acc, &k| &acc * &phi(k));
    phi(r).div_exact(&den)
}
