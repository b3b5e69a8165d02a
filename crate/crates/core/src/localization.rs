//! Localization for isolated fixed points.
//!
//! A monomial `c_{k_1} ... c_{k_r}` in equivariant Chern classes restricts to
//! a fixed point as `prod_j e_{k_j}(weights) * x^degree`, and the equivariant
//! Euler class of the tangent space there is `prod(weights) * x^n`. The
//! pushforward is the sum of the quotients; only the `x^(degree - n)`
//! coefficient exists, so the parameter `x` is never materialized.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{elem_sym_i64, fmt_rational, is_integer};
use crate::model::FixedPointData;

/// The monomial `c_{k_1} * ... * c_{k_r}`; the empty monomial is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChernMonomial {
    indices: Vec<usize>,
}

impl ChernMonomial {
    /// Indices must lie in `1..=n`. They are stored sorted in decreasing order.
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        if let Some(&k) = indices.iter().find(|&&k| k == 0 || k > n) {
            return Err(Error::Domain(format!("Chern class index {k} outside 1..={n}")));
        }
        indices.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { indices })
    }

    /// Parses `c1^2*c3`, `c2 c1`, or `1`. Factors are separated by `*` or whitespace.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        if text == "1" {
            return Ok(Self::one());
        }
        let mut indices = Vec::new();
        for factor in text.split(|c: char| c == '*' || c.is_whitespace()).filter(|f| !f.is_empty()) {
            let bad = || Error::Malformed(format!("cannot parse Chern monomial factor {factor:?}"));
            let body = factor.strip_prefix('c').ok_or_else(bad)?;
            let (k, p) = match body.split_once('^') {
                Some((k, p)) => (k, p.parse::<usize>().map_err(|_| bad())?),
                None => (body, 1),
            };
            let k = k.parse::<usize>().map_err(|_| bad())?;
            indices.extend(std::iter::repeat_n(k, p));
        }
        if indices.is_empty() {
            return Err(Error::Malformed(format!("empty Chern monomial {text:?}")));
        }
        Self::new(indices, n)
    }

    pub fn one() -> Self {
        Self { indices: Vec::new() }
    }

    /// `c_1^power`.
    pub fn c1_pow(power: usize) -> Self {
        Self { indices: vec![1; power] }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn degree(&self) -> usize {
        self.indices.iter().sum()
    }

    /// All monomials of the given degree in `c_1, ..., c_n`, i.e. the
    /// partitions of `degree` into parts of size at most `n`.
    pub fn all_of_degree(degree: usize, n: usize) -> Vec<Self> {
        fn rec(rest: usize, max_part: usize, acc: &mut Vec<usize>, out: &mut Vec<ChernMonomial>) {
            if rest == 0 {
                out.push(ChernMonomial { indices: acc.clone() });
                return;
            }
            for part in (1..=max_part.min(rest)).rev() {
                acc.push(part);
                rec(rest - part, part, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(degree, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for ChernMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.indices.len() {
            let k = self.indices[i];
            let run = self.indices[i..].iter().take_while(|&&x| x == k).count();
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if run == 1 {
                write!(f, "c{k}")?;
            } else {
                write!(f, "c{k}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// `sum_i prod_j e_{k_j}(w_i) / prod(w_i)` over the fixed points.
///
/// For a genuine space the result vanishes below top degree and is the Chern
/// number in top degree. Monomials above top degree are rejected.
pub fn abbv_integral(data: &FixedPointData, mono: &ChernMonomial) -> Result<BigRational> {
    let n = data.n();
    if mono.degree() > n {
        return Err(Error::Domain(format!("monomial {mono} has degree {} above the top degree {n}", mono.degree())));
    }
    if let Some(&k) = mono.indices().iter().find(|&&k| k > n) {
        return Err(Error::Domain(format!("Chern class index {k} outside 1..={n}")));
    }
    let mut total = BigRational::zero();
    for p in data.points() {
        let mut numer = BigInt::from(1);
        for &k in mono.indices() {
            numer *= elem_sym_i64(k, &p.weights)?;
        }
        total += BigRational::new(numer, p.euler_weight());
    }
    Ok(total)
}

/// A top-degree integral, required to be an integer.
pub fn chern_number(data: &FixedPointData, mono: &ChernMonomial) -> Result<BigInt> {
    if mono.degree() != data.n() {
        return Err(Error::Domain(format!("Chern number needs a monomial of degree n = {}, got {mono}", data.n())));
    }
    let value = abbv_integral(data, mono)?;
    if !is_integer(&value) {
        return Err(Error::InvalidDataset(format!("integral of {mono} is {}, not an integer", fmt_rational(&value))));
    }
    Ok(value.numer().clone())
}

/// `c_1 c_{n-1}` (just `c_1` when `n = 1`) as a monomial.
pub fn c1_cn1_monomial(n: usize) -> ChernMonomial {
    if n == 1 {
        ChernMonomial::c1_pow(1)
    } else {
        ChernMonomial { indices: vec![n - 1, 1] }
    }
}

/// The Chern number `int c_1 c_{n-1}`.
pub fn chern_number_c1cn1(data: &FixedPointData) -> Result<BigInt> {
    chern_number(data, &c1_cn1_monomial(data.n()))
}
