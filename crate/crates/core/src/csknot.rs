//! Cappell–Shaneson cubics `f_a(t) = t³ − a·t² + (a−1)·t − 1`.
//!
//! For `a > 5` the roots are real and separated by `1/a, 1/2, 1 − 1/a, a − 2, a`.
//! The companion matrix `A ∈ SL(3, Z)` gives the 2-knot group `Z³ ⋊_A Z`,
//! whose quotient by `⟨⟨tᶜ⟩⟩` has order `c·|det(Aᶜ − I)| = c·|Res(f_a, tᶜ − 1)|`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::zlinalg::{self, IntMatrix};
use crate::{Error, Result};

fn check_a(a: i64) -> Result<()> {
    if a <= 5 {
        return Err(Error::BadParameter(format!("need a > 5, got {a}")));
    }
    Ok(())
}

/// Coefficients of `f_a`, constant term first.
pub fn cubic_coefficients(a: i64) -> [BigInt; 4] {
    [
        BigInt::from(-1),
        BigInt::from(a - 1),
        BigInt::from(-a),
        BigInt::one(),
    ]
}

pub fn eval_cubic(a: i64, t: &BigRational) -> BigRational {
    cubic_coefficients(a)
        .iter()
        .rev()
        .fold(BigRational::from_integer(BigInt::from(0)), |acc, c| {
            acc * t + BigRational::from_integer(c.clone())
        })
}

/// Companion matrix with last column `(1, −(a−1), a)`, so its characteristic
/// polynomial is `f_a`.
pub fn companion(a: i64) -> IntMatrix {
    IntMatrix::from_i64(&[&[0, 0, 1], &[1, 0, -(a - 1)], &[0, 1, a]])
}

/// Sample points `1/a, 1/2, 1 − 1/a, a − 2, a`.
pub fn interval_points(a: i64) -> [BigRational; 5] {
    let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
    [r(1, a), r(1, 2), r(a - 1, a), r(a - 2, 1), r(a, 1)]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootIntervals {
    pub a: i64,
    /// `f_a` at each sample point, as `"p/q"` strings.
    pub values: Vec<String>,
    pub ok: bool,
}

/// Exact sign check `(−, +, −, −, +)` at the sample points, which puts one
/// root in each of `(1/a, 1/2)`, `(1/2, 1 − 1/a)` and `(a − 2, a)`.
pub fn root_intervals(a: i64) -> Result<RootIntervals> {
    check_a(a)?;
    let values: Vec<BigRational> = interval_points(a)
        .iter()
        .map(|t| eval_cubic(a, t))
        .collect();
    let expected = [false, true, false, false, true];
    let ok = values.iter().zip(expected).all(|(v, pos)| {
        if pos {
            v.is_positive()
        } else {
            v.is_negative()
        }
    });
    Ok(RootIntervals {
        a,
        values: values.iter().map(ToString::to_string).collect(),
        ok,
    })
}

pub fn verify_root_intervals(a: i64) -> Result<bool> {
    Ok(root_intervals(a)?.ok)
}

/// `|det(Aᶜ − I)|`, the order of `Z³ / (Aᶜ − I)Z³`.
pub fn resultant_order(a: i64, c: u32) -> Result<BigInt> {
    check_a(a)?;
    if c == 0 {
        return Err(Error::BadParameter("need c ≥ 1".into()));
    }
    let m = companion(a).pow(c).sub_scalar_identity(&BigInt::one());
    Ok(zlinalg::det(&m)?.abs())
}

/// `c·|det(Aᶜ − I)|`.
pub fn quotient_order(a: i64, c: u32) -> Result<BigInt> {
    Ok(resultant_order(a, c)? * BigInt::from(c))
}

/// `c·a^(c−1)`.
pub fn order_bound(a: i64, c: u32) -> BigInt {
    BigInt::from(c) * BigInt::from(a).pow(c.saturating_sub(1))
}

/// True iff all quotient orders are pairwise distinct. Requires `a > 3c` and `a > 5`.
pub fn distinct_orders(pairs: &[(i64, u32)]) -> Result<bool> {
    let mut orders = Vec::with_capacity(pairs.len());
    for &(a, c) in pairs {
        if a <= 3 * c as i64 {
            return Err(Error::BadParameter(format!(
                "need a > 3c, got a = {a}, c = {c}"
            )));
        }
        orders.push(quotient_order(a, c)?);
    }
    orders.sort();
    Ok(orders.windows(2).all(|w| w[0] != w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_interval_examples() {
        let r = root_intervals(6).unwrap();
        assert!(r.ok);
        assert_eq!(r.values[1], "1/8");
        assert_eq!(r.values[3], "-13");
        assert_eq!(r.values[4], "29");
        assert!(verify_root_intervals(7).unwrap());
        assert!(matches!(
            verify_root_intervals(5),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn companion_is_unimodular() {
        for a in 6..20 {
            assert_eq!(zlinalg::det(&companion(a)).unwrap(), BigInt::one());
        }
    }

    #[test]
    fn order_examples() {
        for a in [6, 11, 40] {
            assert_eq!(quotient_order(a, 1).unwrap(), BigInt::one());
        }
        assert_eq!(quotient_order(10, 2).unwrap(), BigInt::from(42));
        assert!(resultant_order(10, 2).unwrap() > BigInt::from(10));
        assert!(quotient_order(10, 0).is_err());
    }

    #[test]
    fn distinct_examples() {
        assert!(distinct_orders(&[(10, 2), (16, 2), (22, 2)]).unwrap());
        assert!(!distinct_orders(&[(6, 1), (9, 1)]).unwrap());
        assert!(distinct_orders(&[]).unwrap());
        assert!(distinct_orders(&[(6, 2)]).is_err());
    }
}
