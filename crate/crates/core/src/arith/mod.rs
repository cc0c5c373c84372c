//! Exact arithmetic: rationals, univariate polynomials, Laurent polynomials
//! and reduced rational functions in one indeterminate.

mod laurent;
mod poly;
mod qseries;
mod ratfunc;

pub use laurent::LaurentPoly;
pub use poly::IntPoly;
pub use qseries::{gauss_binomial, phi, q_factorial_ratio};
pub use ratfunc::RationalFunc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `"num/den"`, or just `"num"` for integers.
pub fn rat_to_string(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

// Unsigned term body: coefficient magnitude and power of `var`.
fn fmt_term(c: &Rat, k: i64, var: &str) -> String {
    let a = c.abs();
    let coef = if k != 0 && a.is_one() {
        String::new()
    } else if a.is_integer() || k == 0 {
        rat_to_string(&a)
    } else {
        format!("({})", rat_to_string(&a))
    };
    match k {
        0 => coef,
        1 => format!("{coef}{var}"),
        _ => format!("{coef}{var}^{k}"),
    }
}

pub(crate) fn join_terms<I: Iterator<Item = (i64, Rat)>>(terms: I, var: &str) -> String {
    let mut out = String::new();
    for (k, c) in terms {
        let body = fmt_term(&c, k, var);
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Sparse JSON form `[[exp, "num/den"], ...]`.
pub fn terms_to_json<I: IntoIterator<Item = (i64, Rat)>>(terms: I) -> Value {
    Value::Array(terms.into_iter().map(|(e, c)| json!([e, rat_to_string(&c)])).collect())
}

pub fn terms_from_json(v: &Value) -> Result<Vec<(i64, Rat)>> {
    let bad = || Error::Parse(format!("expected [[exponent, \"num/den\"], ...], got {v}"));
    let arr = v.as_array().ok_or_else(bad)?;
    arr.iter()
        .map(|t| {
            let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let e = pair[0].as_i64().ok_or_else(bad)?;
            let c = match &pair[1] {
                Value::String(s) => parse_rat(s)?,
                Value::Number(n) => parse_rat(&n.to_string())?,
                _ => return Err(bad()),
            };
            Ok((e, c))
        })
        .collect()
}

impl IntPoly {
    pub fn to_json(&self) -> Value {
        terms_to_json(self.terms().map(|(k, c)| (k as i64, c.clone())))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let mut out = IntPoly::zero();
        for (e, c) in terms_from_json(v)? {
            if e < 0 {
                return Err(Error::Parse("negative exponent in polynomial".into()));
            }
            out += &IntPoly::monomial(c, e as usize);
        }
        Ok(out)
    }
}

impl LaurentPoly {
    pub fn to_json(&self) -> Value {
        terms_to_json(self.terms().iter().map(|(e, c)| (*e, c.clone())))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(LaurentPoly::from_terms(terms_from_json(v)?))
    }
}

impl RationalFunc {
    /// `{"num": [...], "den": [...]}` with sparse term arrays.
    pub fn to_json(&self) -> Value {
        json!({ "num": self.num().to_json(), "den": self.den().to_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let num = v.get("num").ok_or_else(|| Error::Parse("missing \"num\"".into()))?;
        let den = v.get("den").ok_or_else(|| Error::Parse("missing \"den\"".into()))?;
        RationalFunc::new(IntPoly::from_json(num)?, IntPoly::from_json(den)?)
    }
}
