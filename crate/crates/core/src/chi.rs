//! Euler characteristics of complementary regions.
//!
//! For `S⁴ = X ∪_M Y` we have `χ(X) + χ(Y) = 2` and `1 − β ≤ χ(X) ≤ 1 + β`,
//! with `χ(X) ≡ 1 + β (mod 2)`. Regions are ordered so that `χ(X) ≤ χ(Y)`,
//! i.e. `χ(X) ≤ 1`. Writing `γ = β₁(X)` gives `χ(X) = 1 + β − 2γ`.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiStatus {
    /// Not excluded by any implemented test. Says nothing about realizability.
    Allowed,
    Excluded,
    Inconclusive,
}

/// A citation-tagged justification attached to a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reason {
    pub tag: String,
    pub note: String,
}

impl Reason {
    pub fn new(tag: impl Into<String>, note: impl Into<String>) -> Self {
        Reason {
            tag: tag.into(),
            note: note.into(),
        }
    }
}

impl std::fmt::Display for Reason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}", self.tag, self.note)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiVerdict {
    pub chi_x: i64,
    pub chi_y: i64,
    /// `β₁(X)`.
    pub gamma: usize,
    pub status: ChiStatus,
    pub reasons: Vec<Reason>,
}

impl ChiVerdict {
    fn new(beta: usize, gamma: usize) -> Self {
        let chi_x = 1 + beta as i64 - 2 * gamma as i64;
        ChiVerdict {
            chi_x,
            chi_y: 2 - chi_x,
            gamma,
            status: ChiStatus::Allowed,
            reasons: vec![Reason::new(
                "euler-parity-range",
                "χ(X) + χ(Y) = 2 with 1 − β ≤ χ(X) ≤ 1",
            )],
        }
    }

    /// Marks the value excluded. Exclusion is final.
    pub fn exclude(&mut self, reason: Reason) {
        self.status = ChiStatus::Excluded;
        self.reasons.push(reason);
    }

    /// Downgrades an allowed value to inconclusive; excluded values stay excluded.
    pub fn mark_inconclusive(&mut self, reason: Reason) {
        if self.status == ChiStatus::Allowed {
            self.status = ChiStatus::Inconclusive;
        }
        self.reasons.push(reason);
    }

    /// Adds a reason without changing the status.
    pub fn annotate(&mut self, reason: Reason) {
        self.reasons.push(reason);
    }
}

/// All `χ(X)` of the right parity in `[1 − β, 1]`, ascending, each allowed.
pub fn lemma1_set(beta: usize) -> Vec<ChiVerdict> {
    (beta.div_ceil(2)..=beta)
        .rev()
        .map(|gamma| ChiVerdict::new(beta, gamma))
        .collect()
}

/// `γ = β₁(X)` for a given `χ(X)`, if it lies in the range for `β`.
pub fn gamma_for(beta: usize, chi_x: i64) -> Option<usize> {
    let twice = 1 + beta as i64 - chi_x;
    (twice >= 0 && twice % 2 == 0 && (twice / 2) as usize <= beta).then_some((twice / 2) as usize)
}

/// Whether `γ = β₁(X)` survives the rank count that applies when the rational
/// 2-step nilpotent quotient of `π₁(M)` is the product of those of `π₁(X)`
/// and `π₁(Y)`: `β ≥ γ(β − γ)`, except that `β = 4, γ = 2` is ruled out by
/// the 3-form.
pub fn theorem6_compatible(beta: usize, gamma: usize) -> Result<bool> {
    if 2 * gamma < beta || gamma > beta {
        return Err(Error::BadGamma { beta, gamma });
    }
    Ok(beta >= gamma * (beta - gamma) && !(beta == 4 && gamma == 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chis(beta: usize) -> Vec<i64> {
        lemma1_set(beta).iter().map(|v| v.chi_x).collect()
    }

    #[test]
    fn parity_range_examples() {
        assert_eq!(chis(0), vec![1]);
        assert_eq!(chis(1), vec![0]);
        assert_eq!(chis(3), vec![-2, 0]);
        assert_eq!(chis(6), vec![-5, -3, -1, 1]);
        for beta in 0..=12usize {
            let set = lemma1_set(beta);
            assert_eq!(set.len(), beta / 2 + 1);
            for v in &set {
                assert_eq!(v.chi_x + v.chi_y, 2);
                assert!(v.chi_x <= 1 && v.chi_x >= 1 - beta as i64);
                assert_eq!((v.chi_x - 1 - beta as i64).rem_euclid(2), 0);
                assert_eq!(gamma_for(beta, v.chi_x), Some(v.gamma));
                assert_eq!(v.status, ChiStatus::Allowed);
            }
        }
    }

    #[test]
    fn two_step_compatibility_examples() {
        assert!(!theorem6_compatible(4, 2).unwrap());
        assert!(theorem6_compatible(5, 4).unwrap());
        assert!(!theorem6_compatible(6, 4).unwrap());
        assert!(matches!(
            theorem6_compatible(6, 2),
            Err(Error::BadGamma { .. })
        ));
        for beta in 0..=20usize {
            for gamma in beta.div_ceil(2)..=beta {
                if theorem6_compatible(beta, gamma).unwrap() {
                    let chi = 1 + beta as i64 - 2 * gamma as i64;
                    assert!(
                        chi == 1 - beta as i64 || chi == 3 - beta as i64,
                        "β={beta} γ={gamma}"
                    );
                }
            }
        }
    }

    #[test]
    fn exclusion_is_sticky() {
        let mut v = lemma1_set(2).remove(0);
        v.exclude(Reason::new("t", "x"));
        v.mark_inconclusive(Reason::new("t", "y"));
        assert_eq!(v.status, ChiStatus::Excluded);
        assert_eq!(v.reasons.len(), 3);
    }
}
