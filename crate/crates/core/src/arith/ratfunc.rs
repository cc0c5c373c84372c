use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{IntPoly, LaurentPoly, Rat};
use crate::error::{Error, Result};

/// Element of `Q(t)` kept in reduced form: `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunc {
    num: IntPoly,
    den: IntPoly,
}

impl RationalFunc {
    pub fn zero() -> Self {
        RationalFunc { num: IntPoly::zero(), den: IntPoly::one() }
    }

    pub fn one() -> Self {
        RationalFunc { num: IntPoly::one(), den: IntPoly::one() }
    }

    /// The indeterminate.
    pub fn t() -> Self {
        Self::from_poly(IntPoly::x())
    }

    /// `c * t^k` for any integer `k`.
    pub fn monomial(c: Rat, k: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if k >= 0 {
            Self::from_poly(IntPoly::monomial(c, k as usize))
        } else {
            RationalFunc { num: IntPoly::constant(c), den: IntPoly::monomial(Rat::one(), (-k) as usize) }
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(IntPoly::from_int(c))
    }

    pub fn from_rat(c: Rat) -> Self {
        Self::from_poly(IntPoly::constant(c))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        Self::from_rat(Rat::from_integer(c))
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RationalFunc { num: p, den: IntPoly::one() }
    }

    pub fn from_laurent(l: &LaurentPoly) -> Self {
        match l.min_exp() {
            None => Self::zero(),
            Some(m) if m >= 0 => Self::from_poly(l.to_poly().unwrap()),
            Some(m) => {
                let num = l.shift(-m).to_poly().unwrap();
                RationalFunc::normalized(num, IntPoly::monomial(Rat::one(), (-m) as usize))
            }
        }
    }

    /// Build `num / den` in normal form.
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else if den.is_monomial() {
            let k = num.valuation().min(den.valuation());
            (num.unshift(k), den.unshift(k))
        } else {
            let g = IntPoly::gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
            }
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RationalFunc { num, den }
        } else {
            let inv = Rat::one() / lc;
            RationalFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Constant value, if this is a constant.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.den.is_one() && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn to_poly(&self) -> Option<IntPoly> {
        self.is_polynomial().then(|| self.num.clone())
    }

    /// Laurent expansion, if the denominator is a power of the indeterminate.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        if !self.den.is_monomial() {
            return None;
        }
        let k = self.den.valuation() as i64;
        Some(LaurentPoly::from_poly(&self.num).shift(-k))
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u32;
        Ok(RationalFunc { num: self.num.pow(e), den: self.den.pow(e) })
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(x) / d)
    }

    /// Substitute `t -> c * s^k` (with `k != 0`), returning a function of `s`.
    pub fn subst(&self, c: &Rat, k: i64) -> Result<Self> {
        if k == 0 || c.is_zero() {
            return Err(Error::InvalidArgument("substitution must be t -> c*s^k with c, k nonzero".into()));
        }
        if k > 0 {
            let k = k as usize;
            return Ok(Self::normalized(self.num.subst_monomial(c, k), self.den.subst_monomial(c, k)));
        }
        let k = (-k) as usize;
        let reflect = |p: &IntPoly| -> (IntPoly, usize) {
            let d = p.degree().unwrap_or(0);
            let mut cs = vec![Rat::zero(); d * k + 1];
            let mut cp = Rat::one();
            for (i, a) in p.coeffs().iter().enumerate() {
                if !a.is_zero() {
                    cs[(d - i) * k] += a * &cp;
                }
                cp = &cp * c;
            }
            (IntPoly::from_coeffs(cs), d * k)
        };
        let (n, dn) = reflect(&self.num);
        let (d, dd) = reflect(&self.den);
        // num(c s^-k)/den(c s^-k) = s^(dd-dn) * n(s)/d(s)
        let (n, d) = if dd >= dn { (n.shift(dd - dn), d) } else { (n, d.shift(dn - dd)) };
        Ok(Self::normalized(n, d))
    }

    /// The bar involution `t -> t^{-1}`.
    pub fn bar(&self) -> Self {
        self.subst(&Rat::one(), -1).expect("valid substitution")
    }

    /// Render, highest exponents first.
    pub fn display_desc(&self, var: &str) -> String {
        self.render(var, true)
    }

    /// Render, lowest exponents first.
    pub fn display_asc(&self, var: &str) -> String {
        self.render(var, false)
    }

    fn render(&self, var: &str, desc: bool) -> String {
        if let Some(l) = self.to_laurent() {
            return if desc { l.display_desc(var) } else { l.display_asc(var) };
        }
        let f = |p: &IntPoly| if desc { p.display_desc(var) } else { p.display_asc(var) };
        let n = f(&self.num);
        let n = if self.num.terms().count() > 1 { format!("({n})") } else { n };
        format!("{}/({})", n, f(&self.den))
    }
}

impl Default for RationalFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_asc("t"))
    }
}

impl fmt::Debug for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunc({})", self.display_asc("t"))
    }
}

impl From<i64> for RationalFunc {
    fn from(c: i64) -> Self {
        RationalFunc::from_int(c)
    }
}

impl From<Rat> for RationalFunc {
    fn from(c: Rat) -> Self {
        RationalFunc::from_rat(c)
    }
}

impl From<IntPoly> for RationalFunc {
    fn from(p: IntPoly) -> Self {
        RationalFunc::from_poly(p)
    }
}

impl<'a> Add<&'a RationalFunc> for &'a RationalFunc {
    type Output = RationalFunc;
    fn add(self, rhs: &RationalFunc) -> RationalFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RationalFunc { num, den: self.den.clone() };
            }
            return RationalFunc::normalized(num, self.den.clone());
        }
        if self.den.is_monomial() && rhs.den.is_monomial() {
            let (a, b) = (self.den.valuation(), rhs.den.valuation());
            let m = a.max(b);
            let num = &self.num.shift(m - a) + &rhs.num.shift(m - b);
            return RationalFunc::normalized(num, IntPoly::monomial(Rat::one(), m));
        }
        let g = IntPoly::gcd(&self.den, &rhs.den);
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &d1) + &(&rhs.num * &b1);
        let den = &self.den * &d1;
        if num.is_zero() {
            return RationalFunc::zero();
        }
        let g2 = IntPoly::gcd(&num, &g);
        if g2.is_one() {
            RationalFunc { num, den }
        } else {
            RationalFunc { num: num.div_exact(&g2).unwrap(), den: den.div_exact(&g2).unwrap() }
        }
    }
}

impl Add for RationalFunc {
    type Output = RationalFunc;
    fn add(self, rhs: RationalFunc) -> RationalFunc {
        &self + &rhs
    }
}

impl AddAssign<&RationalFunc> for RationalFunc {
    fn add_assign(&mut self, rhs: &RationalFunc) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&RationalFunc> for RationalFunc {
    fn sub_assign(&mut self, rhs: &RationalFunc) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&RationalFunc> for RationalFunc {
    fn mul_assign(&mut self, rhs: &RationalFunc) {
        *self = &*self * rhs;
    }
}

impl Neg for &RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        RationalFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        -&self
    }
}

impl<'a> Sub<&'a RationalFunc> for &'a RationalFunc {
    type Output = RationalFunc;
    fn sub(self, rhs: &RationalFunc) -> RationalFunc {
        self + &(-rhs)
    }
}

impl Sub for RationalFunc {
    type Output = RationalFunc;
    fn sub(self, rhs: RationalFunc) -> RationalFunc {
        &self - &rhs
    }
}

impl<'a> Mul<&'a RationalFunc> for &'a RationalFunc {
    type Output = RationalFunc;
    fn mul(self, rhs: &RationalFunc) -> RationalFunc {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunc { num: &self.num * &rhs.num, den: IntPoly::one() };
        }
        // Cross-cancel so the product is already reduced.
        let cancel = |n: &IntPoly, d: &IntPoly| -> (IntPoly, IntPoly) {
            if d.is_one() {
                return (n.clone(), d.clone());
            }
            if d.is_monomial() {
                let k = n.valuation().min(d.valuation());
                return (n.unshift(k), d.unshift(k));
            }
            let g = IntPoly::gcd(n, d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap())
            }
        };
        let (a, d) = cancel(&self.num, &rhs.den);
        let (c, b) = cancel(&rhs.num, &self.den);
        let num = &a * &c;
        let den = &b * &d;
        let lc = den.leading_coeff();
        if lc.is_one() {
            RationalFunc { num, den }
        } else {
            let inv = Rat::one() / lc;
            RationalFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

impl Mul for RationalFunc {
    type Output = RationalFunc;
    fn mul(self, rhs: RationalFunc) -> RationalFunc {
        &self * &rhs
    }
}

impl<'a> Div<&'a RationalFunc> for &'a RationalFunc {
    type Output = RationalFunc;
    /// Panics on division by zero; use [`RationalFunc::checked_div`] to handle it.
    fn div(self, rhs: &RationalFunc) -> RationalFunc {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Div for RationalFunc {
    type Output = RationalFunc;
    fn div(self, rhs: RationalFunc) -> RationalFunc {
        &self / &rhs
    }
}
