use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// A Laurent polynomial in one variable `p` with exact rational
/// coefficients. Dimension polynomials never carry negative powers once
/// simplified, but intermediate products (`p^N·(1 − p^{-2m})`) do.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    /// Exponent → nonzero coefficient.
    terms: BTreeMap<i64, BigRational>,
}

/// Dimension polynomials are plain Laurent polynomials with no negative powers.
pub type DimPolynomial = LaurentPolynomial;

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn monomial(c: BigRational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPolynomial { terms }
    }

    /// `p^exp`.
    pub fn p_power(exp: i64) -> Self {
        Self::monomial(BigRational::one(), exp)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: i64) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.terms.values().next_back().cloned().unwrap_or_else(BigRational::zero)
    }

    /// True when no negative powers occur.
    pub fn is_polynomial(&self) -> bool {
        self.min_exponent().is_none_or(|e| e >= 0)
    }

    /// Every coefficient has a power of two as denominator.
    pub fn has_dyadic_coefficients(&self) -> bool {
        self.terms.values().all(|c| {
            let d = c.denom().clone();
            let two = BigInt::from(2);
            let mut d = d;
            while d.is_even() {
                d /= &two;
            }
            d.is_one()
        })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPolynomial { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPolynomial { terms: self.terms.iter().map(|(e, x)| (e + by, x.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Exact value at `p = q`; `q` must be nonzero when negative powers occur.
    pub fn evaluate(&self, q: &BigInt) -> BigRational {
        let q = BigRational::from_integer(q.clone());
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let power = if *e >= 0 {
                num_traits::pow(q.clone(), *e as usize)
            } else {
                num_traits::pow(q.recip(), e.unsigned_abs() as usize)
            };
            acc += c * power;
        }
        acc
    }

    /// Value at `p = q` when it is an integer.
    pub fn evaluate_integer(&self, q: &BigInt) -> Option<BigInt> {
        let v = self.evaluate(q);
        v.is_integer().then(|| v.to_integer())
    }

    pub fn evaluate_f64(&self, q: f64) -> f64 {
        self.terms.iter().map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * q.powi(*e as i32)).sum()
    }

    /// Least common denominator of the coefficients.
    pub fn common_denominator(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// `[[num, den], ...]` indexed by degree from `min(0, lowest)` upward.
    pub fn coefficient_pairs(&self) -> Vec<[BigInt; 2]> {
        let (Some(lo), Some(hi)) = (self.min_exponent(), self.degree()) else {
            return Vec::new();
        };
        (lo.min(0)..=hi)
            .map(|e| {
                let c = self.coefficient(e);
                [c.numer().clone(), c.denom().clone()]
            })
            .collect()
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let slot = terms.entry(*e).or_insert_with(BigRational::zero);
            *slot += c;
            if slot.is_zero() {
                terms.remove(e);
            }
        }
        LaurentPolynomial { terms }
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out = &out + &LaurentPolynomial::monomial(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for LaurentPolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| &a + &b)
    }
}

impl std::iter::Product for LaurentPolynomial {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| &a * &b)
    }
}

/// Prints as `(p^4 - p^2)/2`: an integer numerator over the common
/// denominator, highest power first.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let den = self.common_denominator();
        let mut numer = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let n = (c * BigRational::from_integer(den.clone())).to_integer();
            let (sign, mag) = (n.is_negative(), n.abs());
            match (i, sign) {
                (0, true) => numer.push('-'),
                (0, false) => {}
                (_, true) => numer.push_str(" - "),
                (_, false) => numer.push_str(" + "),
            }
            let var = match *e {
                0 => String::new(),
                1 => "p".into(),
                e => format!("p^{e}"),
            };
            if var.is_empty() {
                numer.push_str(&mag.to_string());
            } else if mag.is_one() {
                numer.push_str(&var);
            } else {
                numer.push_str(&format!("{mag}{var}"));
            }
        }
        if den.is_one() {
            write!(f, "{numer}")
        } else if self.terms.len() == 1 && !numer.starts_with('-') {
            write!(f, "{numer}/{den}")
        } else {
            write!(f, "({numer})/{den}")
        }
    }
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coeffs: Vec<[String; 2]> =
            self.coefficient_pairs().into_iter().map(|[n, d]| [n.to_string(), d.to_string()]).collect();
        let mut st = s.serialize_struct("LaurentPolynomial", 3)?;
        st.serialize_field("min_degree", &self.min_exponent().map(|e| e.min(0)).unwrap_or(0))?;
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}
