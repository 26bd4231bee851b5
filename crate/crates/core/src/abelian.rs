//! Which `π₁(X)` can be abelian (or have `G₂ = G₃` in its lower central series).
//!
//! With `r = β₁(X)` and `H₁(X) = Zʳ ⊕ τ`, the group `∧²H₁(X)` must be a
//! quotient of `H₂(X) ≅ Z^(β−r)`, which forces `C(r,2) ≤ β − r ≤ r`.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianCandidate {
    /// `Zʳ`, `Z/n` or `Z ⊕ Z/n` with `n ≥ 1` free.
    pub group: String,
    pub free_rank: usize,
    /// A cyclic torsion summand `Z/n` is allowed.
    pub cyclic_torsion: bool,
    pub constraint: String,
}

fn choose2(r: usize) -> usize {
    r * r.saturating_sub(1) / 2
}

/// The rank inequality `C(r,2) ≤ β − r ≤ r`, plus the torsion rule: nonzero
/// torsion only when `(r, β)` is `(0, 0)` or `(1, 2)`.
pub fn inequality_check(beta: usize, r: usize, torsion_nontrivial: bool) -> Result<bool> {
    if 2 * r < beta {
        return Err(Error::BadRank { beta, r });
    }
    let ranks_ok = r <= beta && choose2(r) <= beta - r && beta - r <= r;
    let torsion_ok = !torsion_nontrivial || matches!((r, beta), (0, 0) | (1, 2));
    Ok(ranks_ok && torsion_ok)
}

/// All abelian `π₁(X)` compatible with `β`, found by scanning `r`.
pub fn abelian_feasibility(beta: usize) -> Vec<AbelianCandidate> {
    (beta.div_ceil(2)..=beta)
        .filter(|&r| inequality_check(beta, r, false).expect("2r ≥ β in range"))
        .map(|r| {
            let cyclic_torsion = inequality_check(beta, r, true).expect("2r ≥ β in range");
            let group = match (r, cyclic_torsion) {
                (0, true) => "Z/n".to_string(),
                (1, true) => "Z ⊕ Z/n".to_string(),
                (1, false) => "Z".to_string(),
                (r, _) => format!("Z^{r}"),
            };
            AbelianCandidate {
                group,
                free_rank: r,
                cyclic_torsion,
                constraint: format!("C({r},2) = {} ≤ β − r = {} ≤ r = {r}", choose2(r), beta - r),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups(beta: usize) -> Vec<String> {
        abelian_feasibility(beta)
            .into_iter()
            .map(|c| c.group)
            .collect()
    }

    #[test]
    fn feasibility_examples() {
        assert_eq!(groups(0), vec!["Z/n"]);
        assert_eq!(groups(1), vec!["Z"]);
        assert_eq!(groups(2), vec!["Z ⊕ Z/n"]);
        assert_eq!(groups(3), vec!["Z^2"]);
        assert_eq!(groups(4), vec!["Z^2"]);
        assert!(groups(5).is_empty());
        assert_eq!(groups(6), vec!["Z^3"]);
        for beta in 7..30 {
            assert!(groups(beta).is_empty());
        }
    }

    #[test]
    fn inequality_examples() {
        assert!(inequality_check(6, 3, false).unwrap());
        assert!(!inequality_check(4, 2, true).unwrap());
        assert!(inequality_check(2, 1, true).unwrap());
        assert!(matches!(
            inequality_check(6, 2, false),
            Err(Error::BadRank { beta: 6, r: 2 })
        ));
    }
}
