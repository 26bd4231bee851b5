//! Exact-arithmetic obstructions to embedding closed orientable 3-manifolds
//! as hypersurfaces of the 4-sphere.
//!
//! Given a manifold `M` splitting `S^4 = X ∪_M Y`, the crate computes which
//! Euler characteristics `χ(X)` survive the available algebraic tests:
//!
//! * parity/range bookkeeping for `χ(X) + χ(Y) = 2` ([`chi`]),
//! * vanishing of the cup-product 3-form on the two halves of a splitting of
//!   `H^1(M)` ([`forms`], [`splitting`]),
//! * Seifert-invariant obstructions ([`seifert`]),
//! * torsion linking pairing tests ([`torsion`]),
//! * explicit Massey-product cochains on Nil groups ([`massey`]),
//! * Cappell–Shaneson quotient orders ([`csknot`]),
//! * abelian `π₁(X)` feasibility ([`abelian`]).
//!
//! [`report`] ties these together into a deterministic [`report::ObstructionReport`].
//! All arithmetic is exact: [`num_bigint::BigInt`] and [`num_rational::BigRational`].

pub mod abelian;
pub mod chi;
pub mod csknot;
mod error;
pub mod forms;
pub mod massey;
pub mod report;
pub mod seifert;
pub mod splitting;
pub mod torsion;
pub mod zlinalg;

pub use error::{Error, Result};

/// Parses a rational written as `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<num_rational::BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: num_bigint::BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: num_bigint::BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == num_bigint::BigInt::from(0) {
                return Err(bad());
            }
            Ok(num_rational::BigRational::new(p, q))
        }
        None => {
            let p: num_bigint::BigInt = s.parse().map_err(|_| bad())?;
            Ok(num_rational::BigRational::from_integer(p))
        }
    }
}
