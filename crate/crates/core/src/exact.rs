//! Exact integer and rational arithmetic helpers.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// `k`-th elementary symmetric polynomial of `values`.
///
/// `e_0 = 1` and `e_len` is the product of all values. The restriction of the
/// equivariant Chern class `c_k` to an isolated fixed point is `e_k` of its
/// weights.
pub fn elem_sym(k: usize, values: &[BigInt]) -> Result<BigInt> {
    if k > values.len() {
        return Err(Error::Domain(format!("elem_sym: k = {k} exceeds the number of values ({})", values.len())));
    }
    // e[j] after processing a prefix holds e_j of that prefix.
    let mut e = vec![BigInt::zero(); k + 1];
    e[0] = BigInt::one();
    for (seen, v) in values.iter().enumerate() {
        let top = k.min(seen + 1);
        for j in (1..=top).rev() {
            let add = &e[j - 1] * v;
            e[j] += add;
        }
    }
    Ok(e.swap_remove(k))
}

/// Same as [`elem_sym`] for machine integers.
pub fn elem_sym_i64(k: usize, values: &[i64]) -> Result<BigInt> {
    let big: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
    elem_sym(k, &big)
}

/// Non-negative gcd of a sequence; the gcd of nothing is 0.
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

pub fn is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q` into a rational in lowest terms.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Format(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Format(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

pub(crate) fn is_unit(q: &BigRational) -> bool {
    is_integer(q) && q.numer().abs().is_one()
}

/// Serde adapters that keep exact numbers exact in JSON: integers and
/// rationals travel as decimal strings.
pub mod serde_str {
    pub mod bigint {
        use num_bigint::BigInt;
        use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&v.to_string())
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
            let s = String::deserialize(d)?;
            s.parse().map_err(D::Error::custom)
        }
    }

    pub mod bigint_vec {
        use num_bigint::BigInt;
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| s.parse().map_err(D::Error::custom)).collect()
        }
    }

    pub mod bigint_opt {
        use num_bigint::BigInt;
        use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(x) => s.serialize_some(&x.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
            let v = Option::<String>::deserialize(d)?;
            v.map(|s| s.parse().map_err(D::Error::custom)).transpose()
        }
    }

    pub mod rational {
        use num_rational::BigRational;
        use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&crate::exact::fmt_rational(v))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
            let s = String::deserialize(d)?;
            crate::exact::parse_rational(&s).map_err(D::Error::custom)
        }
    }

    pub mod rational_opt {
        use num_rational::BigRational;
        use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(x) => s.serialize_some(&crate::exact::fmt_rational(x)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
            let v = Option::<String>::deserialize(d)?;
            v.map(|s| crate::exact::parse_rational(&s).map_err(D::Error::custom)).transpose()
        }
    }

    pub mod rational_vec {
        use num_rational::BigRational;
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&crate::exact::fmt_rational(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| crate::exact::parse_rational(s).map_err(D::Error::custom)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn elem_sym_small_cases() {
        assert_eq!(elem_sym(0, &big(&[1, 3])).unwrap(), BigInt::from(1));
        assert_eq!(elem_sym(1, &big(&[1, 3])).unwrap(), BigInt::from(4));
        assert_eq!(elem_sym(2, &big(&[1, 3])).unwrap(), BigInt::from(3));
        assert_eq!(elem_sym(2, &big(&[-1, 2])).unwrap(), BigInt::from(-2));
        assert_eq!(elem_sym(0, &[]).unwrap(), BigInt::from(1));
    }

    #[test]
    fn elem_sym_rejects_k_above_len() {
        assert!(matches!(elem_sym(3, &big(&[1, 2])), Err(Error::Domain(_))));
    }

    #[test]
    fn rational_parse_and_format() {
        let q = parse_rational("6/-4").unwrap();
        assert_eq!(fmt_rational(&q), "-3/2");
        assert_eq!(fmt_rational(&parse_rational(" 7 ").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn gcd_of_nothing_is_zero() {
        assert_eq!(gcd_all(&[]), BigInt::zero());
        assert_eq!(gcd_all(&big(&[-6, 9])), BigInt::from(3));
    }

    proptest! {
        // coefficient of t^k in prod (1 + v_i t) is e_k
        #[test]
        fn generating_function_identity(values in prop::collection::vec(-20i64..20, 0..8)) {
            let mut poly = vec![BigInt::one()];
            for &v in &values {
                let mut next = vec![BigInt::zero(); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i] += c;
                    next[i + 1] += c * v;
                }
                poly = next;
            }
            for (k, coeff) in poly.iter().enumerate() {
                prop_assert_eq!(&elem_sym_i64(k, &values).unwrap(), coeff);
            }
        }
    }
}
