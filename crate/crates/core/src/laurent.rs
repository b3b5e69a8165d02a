//! Integer Laurent polynomials and exact division of binomial products.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::is_integer;

/// A finitely supported map `exponent -> coefficient` in `Z[t, t^-1]`.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// polynomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<Term>", try_from = "Vec<Term>")]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Term {
    exp: i64,
    #[serde(with = "crate::exact::serde_str::bigint")]
    coeff: BigInt,
}

impl From<LaurentPoly> for Vec<Term> {
    fn from(p: LaurentPoly) -> Self {
        p.terms.into_iter().map(|(exp, coeff)| Term { exp, coeff }).collect()
    }
}

impl TryFrom<Vec<Term>> for LaurentPoly {
    type Error = String;

    fn try_from(terms: Vec<Term>) -> std::result::Result<Self, String> {
        let mut p = LaurentPoly::zero();
        for t in terms {
            if p.terms.contains_key(&t.exp) {
                return Err(format!("exponent {} listed twice", t.exp));
            }
            p.add_term(t.exp, t.coeff);
        }
        Ok(p)
    }
}

/// The quotient is not an element of `Z[t, t^-1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NotDivisible;

impl fmt::Display for NotDivisible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("quotient is not an integer Laurent polynomial")
    }
}

impl std::error::Error for NotDivisible {}

/// Outcome of an exact Laurent division.
pub type Quotient = std::result::Result<LaurentPoly, NotDivisible>;

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(exp: i64, coeff: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `1 - t^p`.
    pub fn one_minus_t_pow(p: i64) -> Self {
        let mut out = Self::one();
        out.add_term(p, -BigInt::one());
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Product of `1 - t^e` over `exps`.
    pub fn binomial_product(exps: &[i64]) -> Self {
        exps.iter().fold(Self::one(), |acc, &e| &acc * &Self::one_minus_t_pow(e))
    }

    /// Exact quotient `self / divisor` in `Z[t, t^-1]`.
    ///
    /// Both sides are shifted by a power of `t` to become polynomials with a
    /// nonzero constant term; the shifted quotient is computed by long division
    /// over the rationals and accepted only when the remainder vanishes and
    /// every quotient coefficient is an integer.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<Quotient> {
        let (d_low, d_high) = match (divisor.min_exp(), divisor.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Err(Error::Domain("division by the zero Laurent polynomial".into())),
        };
        let Some(n_low) = self.min_exp() else {
            return Ok(Ok(Self::zero()));
        };

        let d_deg = d_high - d_low;
        let den: Vec<(i64, BigRational)> =
            divisor.terms.iter().map(|(&e, c)| (e - d_low, BigRational::from_integer(c.clone()))).collect();
        let lead = den.last().expect("divisor is nonzero").1.clone();

        let mut rem: BTreeMap<i64, BigRational> =
            self.terms.iter().map(|(&e, c)| (e - n_low, BigRational::from_integer(c.clone()))).collect();
        let mut quot: BTreeMap<i64, BigRational> = BTreeMap::new();

        while let Some((&top, top_coeff)) = rem.iter().next_back() {
            if top < d_deg {
                break;
            }
            let q = top_coeff / &lead;
            let shift = top - d_deg;
            for (e, c) in &den {
                let slot = rem.entry(e + shift).or_insert_with(BigRational::zero);
                *slot -= &q * c;
                if slot.is_zero() {
                    rem.remove(&(e + shift));
                }
            }
            quot.insert(shift, q);
        }

        if !rem.is_empty() || !quot.values().all(is_integer) {
            return Ok(Err(NotDivisible));
        }
        let shift = n_low - d_low;
        Ok(Ok(Self::from_terms(quot.into_iter().map(|(e, q)| (e + shift, q.numer().clone())))))
    }
}

/// `prod (1 - t^p) / prod (1 - t^q)` when it lies in `Z[t, t^-1]`.
///
/// The outer `Result` carries domain errors (a zero exponent makes a factor
/// vanish); the inner one is the divisibility verdict.
pub fn laurent_ratio(num_exps: &[i64], den_exps: &[i64]) -> Result<Quotient> {
    if let Some(pos) = num_exps.iter().chain(den_exps).position(|&e| e == 0) {
        return Err(Error::Domain(format!("laurent_ratio: exponent #{pos} is zero, so 1 - t^0 vanishes")));
    }
    let num = LaurentPoly::binomial_product(num_exps);
    let den = LaurentPoly::binomial_product(den_exps);
    num.div_exact(&den)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let show_coeff = e == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{e}")?,
            }
        }
        Ok(())
    }
}
