//! Chern-Betti identities and pseudo-index bounds.
//!
//! `int c_1 c_{n-1}` is a fixed linear function of the even Betti numbers.
//! Since a toric 1-skeleton is Poincare dual to `c_{n-1}`, the sum of its edge
//! Chern values equals that number, which gives the non-negative integer
//! `C(rho, n, b) = sum_S c_1[S] - rho * (n/2) * chi`. Written out in the Betti
//! numbers it becomes the parity-split closed form implemented in
//! [`c_integer`]; when `b` is unimodal and `rho > n + 1` it is negative,
//! which bounds the pseudo-index.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{morse_profile, BettiVector, FixedPointData};
use crate::skeleton::SkeletonAnalysis;

/// `sum_k [6k(k-1) + (5n - 3n^2)/2] b_2k`.
pub fn chern_number_from_betti(n: usize, b: &BettiVector) -> Result<BigInt> {
    check_len(n, b)?;
    let n_big = BigInt::from(n);
    let shift = &n_big * 5 - &n_big * &n_big * 3;
    // accumulate twice the value so the /2 stays exact
    let twice: BigInt =
        b.0.iter()
            .enumerate()
            .map(|(k, &bk)| {
                let k = BigInt::from(k);
                (BigInt::from(12) * &k * (&k - 1) + &shift) * BigInt::from(bk)
            })
            .sum();
    let (value, rem) = twice.div_rem(&BigInt::from(2));
    if !rem.is_zero() {
        return Err(Error::Domain(format!("Betti vector {:?} gives a half-integral Chern number", b.0)));
    }
    Ok(value)
}

fn check_len(n: usize, b: &BettiVector) -> Result<()> {
    if n == 0 || b.0.len() != n + 1 {
        return Err(Error::Domain(format!("Betti vector {:?} does not have n + 1 = {} entries", b.0, n + 1)));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CIntegerBreakdown {
    #[serde(with = "crate::exact::serde_str::bigint")]
    pub value: BigInt,
    /// `A_i(rho, n)` for `i = 0..=floor(n/2)`, so that `value = sum A_i b_2i`.
    #[serde(with = "crate::exact::serde_str::bigint_vec")]
    pub coeffs_a: Vec<BigInt>,
    /// `M(rho, n) = sum A_i = n(n+1)(n+1-rho)/2`.
    #[serde(with = "crate::exact::serde_str::bigint")]
    pub m_value: BigInt,
    /// Smallest `i` with `A_i <= 0`, if any.
    pub lambda_index: Option<usize>,
}

/// Coefficients `A_i(rho, n)`, read off the parity-split closed form.
pub fn coeffs_a(rho: &BigInt, n: usize) -> Vec<BigInt> {
    let nb = BigInt::from(n);
    let n_rho = &nb * (rho + 1);
    let half = n / 2;
    let mut a = vec![BigInt::zero(); half + 1];
    if n.is_multiple_of(2) {
        // b_{n-2k} sits at index n/2 - k
        for k in 1..=half {
            let kb = BigInt::from(k);
            a[half - k] = BigInt::from(12) * &kb * &kb - &n_rho;
        }
        a[half] = -(BigInt::from(half) * (rho + BigInt::from(1)));
    } else {
        // b_{n-1-2k} sits at index (n-1)/2 - k
        for k in 1..=half {
            let kb = BigInt::from(k);
            a[half - k] = BigInt::from(12) * &kb * (&kb + 1) + 3 - &n_rho;
        }
        a[half] = BigInt::from(3) - &n_rho;
    }
    a
}

/// `M(rho, n) = n(n+1)(n+1-rho)/2`.
pub fn m_value(rho: &BigInt, n: usize) -> BigInt {
    let nb = BigInt::from(n);
    &nb * (&nb + 1) * (&nb + 1 - rho) / 2
}

/// The closed form, one branch per parity of `n`. Only `b_0 .. b_{2 floor(n/2)}`
/// are read; the upper half is implied by Poincare duality.
fn c_closed_form(rho: &BigInt, n: usize, b: &BettiVector) -> BigInt {
    let nb = BigInt::from(n);
    let n_rho = &nb * (rho + 1);
    // b_j below denotes the Betti number in degree j
    let b_deg = |j: usize| BigInt::from(b.0[j / 2]);
    let mut total = BigInt::zero();
    if n.is_multiple_of(2) {
        for k in 1..=n / 2 {
            let kb = BigInt::from(k);
            total += (BigInt::from(12) * &kb * &kb - &n_rho) * b_deg(n - 2 * k);
        }
        total -= BigInt::from(n / 2) * (rho + BigInt::from(1)) * b_deg(n);
    } else {
        for k in 1..=(n - 1) / 2 {
            let kb = BigInt::from(k);
            total += (BigInt::from(12) * &kb * (&kb + 1) + 3 - &n_rho) * b_deg(n - 1 - 2 * k);
        }
        total -= (&n_rho - BigInt::from(3)) * b_deg(n - 1);
    }
    total
}

/// `C(rho, n, b)` with its coefficient breakdown.
///
/// The closed form is cross-checked against `chern_number_from_betti(n, b) -
/// rho * (n/2) * chi` with `chi = sum b`; any disagreement is an internal error.
pub fn c_integer(rho: &BigInt, n: usize, b: &BettiVector) -> Result<CIntegerBreakdown> {
    check_len(n, b)?;
    if !b.is_palindromic() {
        return Err(Error::Domain(format!("Betti vector {:?} violates Poincare duality", b.0)));
    }
    let value = c_closed_form(rho, n, b);
    let coeffs = coeffs_a(rho, n);

    let linear: BigInt = coeffs.iter().zip(&b.0).map(|(a, &bi)| a * BigInt::from(bi)).sum();
    if linear != value {
        return Err(Error::Internal(format!("sum A_i b_2i = {linear} but C = {value}")));
    }

    let chi = BigInt::from(b.total());
    let twice_edges = BigInt::from(n) * &chi;
    let twice_direct = chern_number_from_betti(n, b)? * 2 - rho * &twice_edges;
    if twice_direct != &value * 2 {
        return Err(Error::Internal(format!(
            "closed form gives C = {value} but sum c1 - rho (n/2) chi = {}/2",
            twice_direct
        )));
    }

    let m = m_value(rho, n);
    let sum_a: BigInt = coeffs.iter().sum();
    if sum_a != m {
        return Err(Error::Internal(format!("sum A_i = {sum_a} but M(rho, n) = {m}")));
    }
    let lambda_index = coeffs.iter().position(|a| !a.is_positive());
    Ok(CIntegerBreakdown { value, coeffs_a: coeffs, m_value: m, lambda_index })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(with = "crate::exact::serde_str::bigint")]
    pub rho: BigInt,
    /// `rho <= 2n`.
    pub bound_2n_ok: bool,
    /// Betti vector is unimodal, so the sharper bound applies.
    pub unimodal_applicable: bool,
    /// `rho <= n + 1`, or vacuous when not applicable.
    pub bound_n_plus_1_ok: bool,
    pub c_nonneg_ok: bool,
    /// `C = 0` exactly when every edge has `c1 = rho`.
    pub c_zero_iff_all_equal_ok: bool,
    pub c_integer: CIntegerBreakdown,
    /// gcd of the edge values. The index of `c_1` must divide it; this is a
    /// divisibility certificate only, not the index itself.
    #[serde(with = "crate::exact::serde_str::bigint")]
    pub index_divisor_bound: BigInt,
}

impl BoundReport {
    pub fn all_ok(&self) -> bool {
        self.bound_2n_ok && self.bound_n_plus_1_ok && self.c_nonneg_ok && self.c_zero_iff_all_equal_ok
    }
}

pub fn check_bounds(data: &FixedPointData, analysis: &SkeletonAnalysis) -> Result<BoundReport> {
    let n = data.n();
    let profile = morse_profile(data);
    let rho = analysis.rho.clone();
    let c = c_integer(&rho, n, &profile.betti)?;
    let unimodal_applicable = profile.unimodal;
    let c_is_zero = c.value.is_zero();
    Ok(BoundReport {
        bound_2n_ok: rho <= BigInt::from(2 * n),
        unimodal_applicable,
        bound_n_plus_1_ok: !unimodal_applicable || rho <= BigInt::from(n + 1),
        c_nonneg_ok: !c.value.is_negative(),
        c_zero_iff_all_equal_ok: c_is_zero == analysis.all_equal_rho,
        c_integer: c,
        index_divisor_bound: analysis.c1_gcd.clone(),
        rho,
    })
}
