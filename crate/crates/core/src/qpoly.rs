//! Integer polynomials in the formal weight `q`.
//!
//! Every structure constant in this crate is a `QPoly`. Coefficients are
//! arbitrary precision, and the representation is a sparse exponent map
//! with no zero entries, so equality is structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Sparse polynomial `Σ c_e q^e`, sorted by exponent, no zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    terms: Vec<(u32, BigInt)>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: u32) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            QPoly { terms: vec![(exp, c)] }
        }
    }

    /// `q^exp`.
    pub fn q_pow(exp: u32) -> Self {
        Self::monomial(1, exp)
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging repeated exponents and dropping zeros.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, C)>,
        C: Into<BigInt>,
    {
        let mut v: Vec<(u32, BigInt)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        v.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(u32, BigInt)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        QPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Single `c q^e` term, if the polynomial is one.
    pub fn as_monomial(&self) -> Option<(u32, &BigInt)> {
        match self.terms.as_slice() {
            [(e, c)] => Some((*e, c)),
            _ => None,
        }
    }

    pub fn terms(&self) -> &[(u32, BigInt)] {
        &self.terms
    }

    pub fn coeff(&self, exp: u32) -> BigInt {
        self.terms
            .binary_search_by_key(&exp, |(e, _)| *e)
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// Highest exponent; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|(e, _)| *e)
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let sgn = |c: &BigInt| if negate_other { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, sgn(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(e, c)| (*e, sgn(c))));
        QPoly { terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut acc: Vec<(u32, BigInt)> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                acc.push((ea + eb, ca * cb));
            }
        }
        Self::from_terms(acc)
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: u32) -> Self {
        QPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Horner evaluation at `q = v`.
    pub fn eval(&self, v: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut prev = match self.terms.last() {
            Some((e, _)) => *e,
            None => return acc,
        };
        for (e, c) in self.terms.iter().rev() {
            for _ in *e..prev {
                acc *= v;
            }
            acc += c;
            prev = *e;
        }
        for _ in 0..prev {
            acc *= v;
        }
        acc
    }

    pub fn eval_i64(&self, v: i64) -> BigInt {
        self.eval(&BigInt::from(v))
    }

    /// Substitutes `q = v`, keeping the result as a constant polynomial.
    pub fn specialize(&self, v: i64) -> Self {
        Self::monomial(self.eval_i64(v), 0)
    }

    /// `[[exponent, coefficient], ...]`, sorted by exponent. Coefficients
    /// that do not fit an `i64` are emitted as decimal strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| {
                    let cv = match c.to_i64() {
                        Some(x) => Value::from(x),
                        None => Value::String(c.to_string()),
                    };
                    Value::Array(vec![Value::from(*e), cv])
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("not a q-polynomial: {v}"));
        let arr = v.as_array().ok_or_else(bad)?;
        let mut terms = Vec::with_capacity(arr.len());
        for pair in arr {
            let p = pair.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let e = p[0].as_u64().and_then(|e| u32::try_from(e).ok()).ok_or_else(bad)?;
            let c: BigInt = match &p[1] {
                Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(bad)?,
                Value::String(s) => s.parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            };
            terms.push((e, c));
        }
        Ok(Self::from_terms(terms))
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, e: u32, c: &BigInt, leading: bool) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if leading {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if neg { " - " } else { " + " })?;
    }
    match e {
        0 => write!(f, "{abs}"),
        _ => {
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            if e == 1 {
                write!(f, "q")
            } else {
                write!(f, "q^{e}")
            }
        }
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            fmt_monomial(f, *e, c, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

/// Parses one `*`-separated product of factors, each an integer, `q` or `q^e`.
pub(crate) fn parse_scalar_factor(tok: &str) -> Result<QPoly> {
    let tok = tok.trim();
    if tok == "q" {
        return Ok(QPoly::q());
    }
    if let Some(exp) = tok.strip_prefix("q^") {
        let e: u32 = exp
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
        return Ok(QPoly::q_pow(e));
    }
    let c: BigInt = tok.parse().map_err(|_| Error::Parse(format!("bad scalar factor `{tok}`")))?;
    Ok(QPoly::monomial(c, 0))
}

/// Splits `s` into signed top-level summands. Brackets of any kind nest.
pub(crate) fn split_summands(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut negative = false;
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced brackets in `{s}`")));
        }
        if depth == 0 && (ch == '+' || ch == '-') {
            if !cur.trim().is_empty() {
                out.push((negative, cur.trim().to_string()));
                cur.clear();
                negative = false;
            }
            if ch == '-' {
                negative = !negative;
            }
            continue;
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in `{s}`")));
    }
    if cur.trim().is_empty() {
        return Err(Error::Parse(format!("missing term in `{s}`")));
    }
    out.push((negative, cur.trim().to_string()));
    Ok(out)
}

impl FromStr for QPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut acc = QPoly::zero();
        for (neg, term) in split_summands(s)? {
            let mut t = QPoly::one();
            for factor in term.split('*') {
                t = t.mul(&parse_scalar_factor(factor)?);
            }
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }
}

impl From<i64> for QPoly {
    fn from(c: i64) -> Self {
        QPoly::constant(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&QPoly> for &QPoly {
            type Output = QPoly;
            fn $m(self, rhs: &QPoly) -> QPoly {
                QPoly::$inner(self, rhs)
            }
        }
        impl $tr<QPoly> for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: QPoly) -> QPoly {
                QPoly::$inner(&self, &rhs)
            }
        }
        impl $tr<&QPoly> for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: &QPoly) -> QPoly {
                QPoly::$inner(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        *self = QPoly::add(self, rhs);
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        *self = QPoly::sub(self, rhs);
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}
