//! Seifert fibred manifolds `M(g; S)`.
//!
//! A nonnegative genus `g` means base orbifold `T_g(α₁, …, α_r)`; a negative
//! genus `−c` means base `#^c RP²(α₁, …, α_r)`. Data are unnormalized: `βᵢ`
//! is not reduced mod `αᵢ`, and pairs `(1, e)` encode the bundle part.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chi::{self, ChiStatus, ChiVerdict, Reason};
use crate::torsion::{homology_of_relations, Homology};
use crate::zlinalg::IntMatrix;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeifertData {
    pub genus: i64,
    pub pairs: Vec<(i64, i64)>,
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .pairs
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect();
        write!(f, "M({};{{{}}})", self.genus, pairs.join(","))
    }
}

impl SeifertData {
    /// Validates `αᵢ ≥ 1` and `gcd(αᵢ, βᵢ) = 1`, then normalizes: all `(1, e)`
    /// pairs are merged into one by summing `e`, and cone points are sorted.
    pub fn new(genus: i64, pairs: Vec<(i64, i64)>) -> Result<Self> {
        for &(a, b) in &pairs {
            if a < 1 {
                return Err(Error::Invalid(format!(
                    "Seifert pair ({a},{b}) needs α ≥ 1"
                )));
            }
            if a.gcd(&b) != 1 {
                return Err(Error::Invalid(format!(
                    "Seifert pair ({a},{b}) is not coprime"
                )));
            }
        }
        let bundle: Vec<i64> = pairs.iter().filter(|p| p.0 == 1).map(|p| p.1).collect();
        let mut cones: Vec<(i64, i64)> = pairs.into_iter().filter(|p| p.0 > 1).collect();
        cones.sort_unstable();
        if !bundle.is_empty() {
            let e = bundle.iter().try_fold(0i64, |acc, &x| acc.checked_add(x));
            cones.push((
                1,
                e.ok_or_else(|| Error::Invalid("Euler number overflows".into()))?,
            ));
        }
        Ok(SeifertData {
            genus,
            pairs: cones,
        })
    }

    /// The `S¹`-bundle `M(g; (1, e))`, with Euler number `−e`.
    pub fn bundle(genus: i64, e: i64) -> Self {
        SeifertData {
            genus,
            pairs: vec![(1, e)],
        }
    }

    pub fn is_orientable_base(&self) -> bool {
        self.genus >= 0
    }

    /// Number of cross-caps of a nonorientable base, else 0.
    pub fn crosscaps(&self) -> u64 {
        if self.genus < 0 {
            self.genus.unsigned_abs()
        } else {
            0
        }
    }

    /// Cone point orders `αᵢ > 1`.
    pub fn cone_orders(&self) -> Vec<i64> {
        self.pairs.iter().filter(|p| p.0 > 1).map(|p| p.0).collect()
    }

    /// `Some(e)` when there are no cone points, so `M = M(g; (1, e))`.
    pub fn bundle_euler(&self) -> Option<i64> {
        match self.pairs.as_slice() {
            [] => Some(0),
            [(1, e)] => Some(*e),
            _ => None,
        }
    }
}

/// `ε_S = −Σ βᵢ/αᵢ`.
pub fn euler_invariant(s: &SeifertData) -> BigRational {
    -s.pairs
        .iter()
        .map(|&(a, b)| BigRational::new(BigInt::from(b), BigInt::from(a)))
        .sum::<BigRational>()
}

/// Abelianized relation matrix of `π₁(M(g;S))`.
///
/// Orientable base: generators `x₁, y₁, …, x_g, y_g, c₁, …, c_r, h` with
/// `Σcⱼ = 0` and `αᵢcᵢ + βᵢh = 0`. Nonorientable base `P_c`: generators
/// `v₁, …, v_c, c₁, …, c_r, h` with `2h = 0` (the fibre is reversed),
/// `αᵢcᵢ + βᵢh = 0` and `2Σvⱼ + Σcⱼ = 0`.
pub fn relation_matrix(s: &SeifertData) -> IntMatrix {
    let r = s.pairs.len();
    let surface = if s.is_orientable_base() {
        2 * s.genus as usize
    } else {
        s.crosscaps() as usize
    };
    let cols = surface + r + 1;
    let h = cols - 1;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut product = vec![BigInt::zero(); cols];
    if !s.is_orientable_base() {
        for v in product.iter_mut().take(surface) {
            *v = BigInt::from(2);
        }
        let mut twist = vec![BigInt::zero(); cols];
        twist[h] = BigInt::from(2);
        rows.push(twist);
    }
    for i in 0..r {
        product[surface + i] = BigInt::from(1);
    }
    rows.push(product);
    for (i, &(a, b)) in s.pairs.iter().enumerate() {
        let mut row = vec![BigInt::zero(); cols];
        row[surface + i] = BigInt::from(a);
        row[h] = BigInt::from(b);
        rows.push(row);
    }
    IntMatrix::from_rows(&rows, cols).expect("rows have the generator count")
}

pub fn homology(s: &SeifertData) -> Homology {
    homology_of_relations(&relation_matrix(s))
}

/// Residue of `b` mod `a` in `[0, a)`.
fn residue(a: i64, b: i64) -> i64 {
    b.rem_euclid(a)
}

/// Tries to partition `items` into matched pairs, by backtracking.
fn pairs_up<T>(items: &[T], matches: &dyn Fn(&T, &T) -> bool) -> bool {
    fn go<T>(items: &[T], used: &mut [bool], matches: &dyn Fn(&T, &T) -> bool) -> bool {
        let Some(i) = used.iter().position(|u| !u) else {
            return true;
        };
        used[i] = true;
        for j in i + 1..items.len() {
            if !used[j] && matches(&items[i], &items[j]) {
                used[j] = true;
                if go(items, used, matches) {
                    return true;
                }
                used[j] = false;
            }
        }
        used[i] = false;
        false
    }
    items.len().is_multiple_of(2) && go(items, &mut vec![false; items.len()], matches)
}

/// Cone points pair off as `{(a, b), (a, −b)}` and `ε_S = 0`.
///
/// Compared up to Seifert equivalence: `βᵢ` is taken mod `αᵢ`, and the
/// integer parts are absorbed by the `ε_S = 0` condition.
pub fn is_skew_symmetric(s: &SeifertData) -> bool {
    let cones: Vec<(i64, i64)> = s
        .pairs
        .iter()
        .filter(|p| p.0 > 1)
        .map(|&(a, b)| (a, residue(a, b)))
        .collect();
    euler_invariant(s).is_zero()
        && pairs_up(&cones, &|x, y| x.0 == y.0 && residue(x.0, x.1 + y.1) == 0)
}

/// Cone points pair off as `{(a, b), (a, −b′)}` with `b′ ≡ b` or `bb′ ≡ 1 (mod a)`.
pub fn is_weakly_skew_symmetric(s: &SeifertData) -> bool {
    let cones: Vec<(i64, i64)> = s.pairs.iter().filter(|p| p.0 > 1).copied().collect();
    pairs_up(&cones, &|x, y| {
        let a = x.0;
        if a != y.0 {
            return false;
        }
        let b = residue(a, x.1);
        let b_prime = residue(a, -y.1);
        b_prime == b || residue(a, b * b_prime) == 1 % a
    })
}

fn two_adic_valuation(n: i64) -> u32 {
    n.trailing_zeros()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothObstructions {
    pub skew_symmetric: bool,
    pub weakly_skew_symmetric: bool,
    pub even_cone_orders: Vec<i64>,
    /// All even cone orders share one 2-adic valuation.
    pub even_cone_same_valuation: bool,
    /// All even cone orders are equal.
    pub even_cone_all_equal: bool,
    /// The applicable even-cone test: equal orders over a nonorientable base,
    /// equal 2-adic valuations otherwise.
    pub even_cone_condition: bool,
    /// Conclusions about smooth embeddings that follow from the predicates.
    pub conclusions: Vec<Reason>,
}

pub fn smooth_obstructions(s: &SeifertData) -> SmoothObstructions {
    let skew = is_skew_symmetric(s);
    let weak = is_weakly_skew_symmetric(s);
    let even: Vec<i64> = s.cone_orders().into_iter().filter(|a| a % 2 == 0).collect();
    let same_val = even
        .windows(2)
        .all(|w| two_adic_valuation(w[0]) == two_adic_valuation(w[1]));
    let all_equal = even.windows(2).all(|w| w[0] == w[1]);
    let eps = euler_invariant(s);
    let mut conclusions = Vec::new();
    if !same_val {
        conclusions.push(Reason::new(
            "even-cone-valuation",
            "even cone orders have different 2-adic valuations, so the linking pairing is not hyperbolic: no embedding at all",
        ));
    }
    if s.is_orientable_base() && eps.is_zero() {
        if !skew {
            conclusions.push(Reason::new(
                "smooth-skew-symmetric",
                "ε_S = 0 but the data are not skew-symmetric: no smooth embedding",
            ));
        } else if s.cone_orders().iter().all(|a| a % 2 == 1) {
            conclusions.push(Reason::new(
                "smooth-skew-construction",
                "skew-symmetric data with odd cone orders: embeds smoothly with χ(X) = 0",
            ));
        }
    }
    if !s.is_orientable_base() {
        if !weak {
            conclusions.push(Reason::new(
                "smooth-weak-skew-symmetric",
                "nonorientable base and data not weakly skew-symmetric: no smooth embedding",
            ));
        }
        if !all_equal {
            conclusions.push(Reason::new(
                "smooth-even-cone-equal",
                "nonorientable base and even cone orders differ: no smooth embedding",
            ));
        }
    }
    SmoothObstructions {
        skew_symmetric: skew,
        weakly_skew_symmetric: weak,
        even_cone_orders: even,
        even_cone_same_valuation: same_val,
        even_cone_all_equal: all_equal,
        even_cone_condition: if s.is_orientable_base() {
            same_val
        } else {
            all_equal
        },
        conclusions,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonorientableConstraints {
    /// `|e| ≤ 2c` and `e ≡ 2c (mod 4)`: the normal Euler numbers of `P_c ⊂ S⁴`.
    pub embeddable_normal_data: bool,
    /// `χ(X)` realized by the standard constructions.
    pub realized_chi: Vec<i64>,
    /// Remaining values of the parity/range set, not known either way.
    pub open_chi: Vec<i64>,
}

/// Constraints on `M(−c; (1, e))`, which embeds iff it bounds a regular
/// neighbourhood of an embedded `#^c RP²` with normal Euler number `e`.
pub fn nonorientable_constraints(c: u64, e: i64) -> Result<NonorientableConstraints> {
    if c == 0 {
        return Err(Error::BadParameter("nonorientable base needs c ≥ 1".into()));
    }
    let c_i = c as i64;
    let ok = e.unsigned_abs() <= 2 * c && (e - 2 * c_i).rem_euclid(4) == 0;
    // β = c − 1, so the parity/range set is 2 − c ≤ χ ≤ 1 with χ ≡ c (mod 2).
    let all: Vec<i64> = chi::lemma1_set((c - 1) as usize)
        .iter()
        .map(|v| v.chi_x)
        .collect();
    if !ok {
        return Ok(NonorientableConstraints {
            embeddable_normal_data: false,
            realized_chi: Vec::new(),
            open_chi: Vec::new(),
        });
    }
    let upper = (2 - e.abs() / 2).min(1);
    let (realized_chi, open_chi) = all.into_iter().partition(|&x| 2 - c_i <= x && x <= upper);
    Ok(NonorientableConstraints {
        embeddable_normal_data: true,
        realized_chi,
        open_chi,
    })
}

/// The `χ(X)` table for `M(g; S)` with the Seifert-specific exclusions applied.
pub fn obstruct(s: &SeifertData) -> Vec<ChiVerdict> {
    let beta = homology(s).betti;
    let mut table = chi::lemma1_set(beta);
    let eps = euler_invariant(s);
    let fibre = Reason::new(
        "seifert-fibre-class",
        "ε_S = 0 over an orientable base of genus ≥ 1 makes the 3-form nonzero, so χ(X) > 1 − β",
    );
    if s.genus >= 1 && eps.is_zero() {
        for v in &mut table {
            if v.chi_x == 1 - beta as i64 {
                v.exclude(fibre.clone());
            } else if v.chi_x < 0 {
                v.annotate(Reason::new(
                    "seifert-fibre-class",
                    "the regular fibre must map nontrivially to H₁(Y;Q)",
                ));
            }
        }
    }
    if s.genus >= 0 && !eps.is_zero() {
        for v in table.iter_mut().filter(|v| v.chi_x != 1) {
            v.exclude(Reason::new(
                "seifert-nonzero-euler",
                "ε_S ≠ 0 over an orientable base: Massey products force χ(X) = χ(Y) = 1",
            ));
        }
    }
    if s.genus == 0 && eps.is_zero() && !is_skew_symmetric(s) {
        for v in &mut table {
            v.exclude(Reason::new(
                "seifert-skew-symmetric",
                "β = 1 forces χ(X) = 0 with the fibre nontrivial in H₁(X;Q), which needs skew-symmetric data",
            ));
        }
    }
    if !s.is_orientable_base() {
        if let Some(e) = s.bundle_euler() {
            let nc = nonorientable_constraints(s.crosscaps(), e)
                .expect("c ≥ 1 for a nonorientable base");
            for v in &mut table {
                if !nc.embeddable_normal_data {
                    v.exclude(Reason::new(
                        "nonorientable-bundle",
                        format!(
                            "normal Euler number {e} is impossible for #^{} RP² in S⁴",
                            s.crosscaps()
                        ),
                    ));
                } else if nc.realized_chi.contains(&v.chi_x) {
                    v.annotate(Reason::new(
                        "nonorientable-bundle",
                        "realized by a standard construction",
                    ));
                } else {
                    v.mark_inconclusive(Reason::new(
                        "nonorientable-bundle",
                        "not realized by the standard constructions; open",
                    ));
                }
            }
        }
    }
    table
}

/// Number of rows not excluded.
pub fn allowed_count(table: &[ChiVerdict]) -> usize {
    table
        .iter()
        .filter(|v| v.status != ChiStatus::Excluded)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::FiniteAbelian;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn sd(g: i64, pairs: &[(i64, i64)]) -> SeifertData {
        SeifertData::new(g, pairs.to_vec()).unwrap()
    }

    fn factors(h: &Homology) -> Vec<i64> {
        h.torsion
            .invariant_factors()
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_invariant(&sd(1, &[(1, 1)])), rat(-1, 1));
        assert_eq!(euler_invariant(&sd(0, &[(2, 1), (2, -1)])), rat(0, 1));
        assert_eq!(euler_invariant(&sd(0, &[(3, 1), (5, 2)])), rat(-11, 15));
    }

    #[test]
    fn normalization_merges_bundle_pairs() {
        assert_eq!(sd(1, &[(1, 0), (1, 1)]), sd(1, &[(1, 1)]));
        assert_eq!(
            sd(0, &[(5, 2), (1, 3), (2, 1), (1, -1)]).pairs,
            vec![(2, 1), (5, 2), (1, 2)]
        );
        assert!(SeifertData::new(0, vec![(4, 2)]).is_err());
        assert!(SeifertData::new(0, vec![(0, 1)]).is_err());
    }

    #[test]
    fn homology_examples() {
        assert_eq!(
            homology(&sd(1, &[(1, 1)])),
            Homology {
                betti: 2,
                torsion: FiniteAbelian::trivial()
            }
        );
        let h = homology(&sd(0, &[(2, 1), (2, -1)]));
        assert_eq!((h.betti, h.torsion.is_trivial()), (1, true));
        for g in 0..4 {
            assert_eq!(homology(&sd(g, &[(1, 0)])).betti, 2 * g as usize + 1);
        }
        let h = homology(&sd(-2, &[(1, 0)]));
        assert_eq!((h.betti, factors(&h)), (1, vec![2, 2]));
        let h = homology(&sd(-1, &[(1, 2)]));
        assert_eq!((h.betti, factors(&h)), (0, vec![2, 2]));
        let h = homology(&sd(2, &[(1, 3)]));
        assert_eq!((h.betti, factors(&h)), (4, vec![3]));
    }

    #[test]
    fn obstruct_examples() {
        let only = |t: Vec<ChiVerdict>| -> Vec<i64> {
            t.into_iter()
                .filter(|v| v.status != ChiStatus::Excluded)
                .map(|v| v.chi_x)
                .collect()
        };
        assert_eq!(only(obstruct(&sd(1, &[(1, 1)]))), vec![1]);
        assert_eq!(only(obstruct(&sd(1, &[(1, 0)]))), vec![0]);
        assert_eq!(only(obstruct(&sd(0, &[(2, 1), (2, -1)]))), vec![0]);
        assert_eq!(only(obstruct(&sd(2, &[(1, 0)]))), vec![-2, 0]);
        assert_eq!(
            only(obstruct(&sd(0, &[(3, 1), (3, 1), (3, 1), (1, -1)]))),
            Vec::<i64>::new()
        );
    }

    #[test]
    fn nonorientable_examples() {
        let nc = nonorientable_constraints(1, 2).unwrap();
        assert!(nc.embeddable_normal_data);
        assert_eq!(nc.realized_chi, vec![1]);
        assert!(
            !nonorientable_constraints(2, 1)
                .unwrap()
                .embeddable_normal_data
        );
        let nc = nonorientable_constraints(3, 6).unwrap();
        assert_eq!((nc.realized_chi, nc.open_chi), (vec![-1], vec![1]));
        let nc = nonorientable_constraints(3, -2).unwrap();
        assert_eq!(nc.realized_chi, vec![-1, 1]);
        assert!(nonorientable_constraints(0, 0).is_err());
    }

    #[test]
    fn smooth_examples() {
        assert!(smooth_obstructions(&sd(0, &[(2, 1), (2, -1)])).skew_symmetric);
        let so = smooth_obstructions(&sd(-1, &[(5, 2), (5, -3)]));
        assert!(so.weakly_skew_symmetric && !so.skew_symmetric);
        let so = smooth_obstructions(&sd(0, &[(2, 1), (4, -1)]));
        assert!(!so.even_cone_condition && !so.even_cone_same_valuation);
        let so = smooth_obstructions(&sd(-2, &[(2, 1), (6, -1)]));
        assert!(so.even_cone_same_valuation && !so.even_cone_all_equal && !so.even_cone_condition);
        assert!(is_skew_symmetric(&sd(0, &[(3, 1), (3, 2), (1, -1)])));
        assert!(!is_skew_symmetric(&sd(0, &[(3, 1), (3, 2)])));
        assert!(!is_skew_symmetric(&sd(
            0,
            &[(3, 1), (3, 1), (3, 1), (1, -1)]
        )));
    }
}
