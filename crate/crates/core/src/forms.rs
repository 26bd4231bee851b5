//! Integer alternating trilinear forms on `Z^β`: the cup-product 3-form of a
//! closed orientable 3-manifold, viewed as an element of `∧³ Hom(H, Z)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::zlinalg::{self, IntMatrix};
use crate::{Error, Result};

/// Sparse alternating 3-form. Keys are strictly increasing 0-based index
/// triples; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlternatingForm3 {
    beta: usize,
    coeffs: BTreeMap<[usize; 3], BigInt>,
}

/// Sorts a triple, returning the sign of the sorting permutation, or `None`
/// when an index repeats.
fn sort_triple(t: [usize; 3]) -> Option<([usize; 3], i8)> {
    let [mut a, mut b, mut c] = t;
    let mut sign = 1i8;
    if a > b {
        std::mem::swap(&mut a, &mut b);
        sign = -sign;
    }
    if b > c {
        std::mem::swap(&mut b, &mut c);
        sign = -sign;
    }
    if a > b {
        std::mem::swap(&mut a, &mut b);
        sign = -sign;
    }
    (a < b && b < c).then_some(([a, b, c], sign))
}

fn det3(u: &[BigInt], v: &[BigInt], w: &[BigInt], [i, j, k]: [usize; 3]) -> BigInt {
    &u[i] * (&v[j] * &w[k] - &v[k] * &w[j]) - &u[j] * (&v[i] * &w[k] - &v[k] * &w[i])
        + &u[k] * (&v[i] * &w[j] - &v[j] * &w[i])
}

impl AlternatingForm3 {
    pub fn zero(beta: usize) -> Self {
        AlternatingForm3 {
            beta,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a form from 0-based monomials `e_i ∧ e_j ∧ e_k`. Unordered
    /// triples are sorted with the permutation sign; repeated indices
    /// contribute nothing; repeated monomials add up.
    pub fn from_monomials<I>(beta: usize, monomials: I) -> Result<Self>
    where
        I: IntoIterator<Item = ([usize; 3], BigInt)>,
    {
        let mut f = Self::zero(beta);
        for (t, c) in monomials {
            if let Some(&bad) = t.iter().find(|&&i| i >= beta) {
                return Err(Error::Invalid(format!(
                    "monomial index {} out of range 1..={beta}",
                    bad + 1
                )));
            }
            let Some((key, sign)) = sort_triple(t) else {
                continue;
            };
            let entry = f.coeffs.entry(key).or_insert_with(BigInt::zero);
            if sign > 0 {
                *entry += c;
            } else {
                *entry -= c;
            }
        }
        f.coeffs.retain(|_, c| !c.is_zero());
        Ok(f)
    }

    /// `e1∧e2∧e3 + e1∧e5∧e6 + e2∧e4∧e5` on `Z^6`: no epimorphism to `Z` kills
    /// it on its kernel.
    pub fn counterexample6() -> Self {
        let one = || BigInt::from(1);
        Self::from_monomials(
            6,
            [([0, 1, 2], one()), ([0, 4, 5], one()), ([1, 3, 4], one())],
        )
        .expect("indices in range")
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    /// Nonzero coefficients over increasing 0-based triples.
    pub fn coeffs(&self) -> impl Iterator<Item = (&[usize; 3], &BigInt)> {
        self.coeffs.iter()
    }

    /// `f(e_i, e_j, e_k)` for arbitrary 0-based indices.
    pub fn coeff(&self, t: [usize; 3]) -> BigInt {
        match sort_triple(t) {
            Some((key, sign)) => match self.coeffs.get(&key) {
                Some(c) if sign > 0 => c.clone(),
                Some(c) => -c,
                None => BigInt::zero(),
            },
            None => BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_len(&self, v: &[BigInt]) -> Result<()> {
        if v.len() == self.beta {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.beta,
                got: v.len(),
            })
        }
    }

    pub fn evaluate(&self, u: &[BigInt], v: &[BigInt], w: &[BigInt]) -> Result<BigInt> {
        self.check_len(u)?;
        self.check_len(v)?;
        self.check_len(w)?;
        Ok(self.evaluate_unchecked(u, v, w))
    }

    pub(crate) fn evaluate_unchecked(&self, u: &[BigInt], v: &[BigInt], w: &[BigInt]) -> BigInt {
        self.coeffs.iter().map(|(&t, c)| c * det3(u, v, w, t)).sum()
    }

    /// Pulls the form back to the lattice spanned by `basis`: the result has
    /// rank `basis.len()` and coefficient `f(bᵢ, bⱼ, b_k)` on `(i, j, k)`.
    pub fn restrict(&self, basis: &[Vec<BigInt>]) -> Result<Self> {
        for b in basis {
            self.check_len(b)?;
        }
        let m = IntMatrix::from_rows(basis, self.beta)?;
        if zlinalg::rank(&m) != basis.len() {
            return Err(Error::DependentInput);
        }
        Ok(self.restrict_unchecked(basis))
    }

    pub(crate) fn restrict_unchecked(&self, basis: &[Vec<BigInt>]) -> Self {
        let n = basis.len();
        let mut coeffs = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let c = self.evaluate_unchecked(&basis[i], &basis[j], &basis[k]);
                    if !c.is_zero() {
                        coeffs.insert([i, j, k], c);
                    }
                }
            }
        }
        AlternatingForm3 { beta: n, coeffs }
    }

    /// True iff `f` vanishes on `∧³` of the span of `vectors` (no
    /// independence requirement).
    pub fn vanishes_on(&self, vectors: &[Vec<BigInt>]) -> bool {
        let n = vectors.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                (j + 1..n).all(|k| {
                    self.evaluate_unchecked(&vectors[i], &vectors[j], &vectors[k])
                        .is_zero()
                })
            })
        })
    }

    /// Change of basis: `g(u, v, w) = f(P·u, P·v, P·w)` for a square `P`.
    pub fn pullback(&self, p: &IntMatrix) -> Result<Self> {
        if p.rows() != self.beta || p.cols() != self.beta {
            return Err(Error::DimensionMismatch {
                expected: self.beta,
                got: if p.rows() != self.beta {
                    p.rows()
                } else {
                    p.cols()
                },
            });
        }
        let cols: Vec<Vec<BigInt>> = (0..self.beta).map(|j| p.column(j)).collect();
        Ok(self.restrict_unchecked(&cols))
    }

    /// The contraction matrix of `∧²H → H*`, `ω ↦ (c ↦ f(ω ∧ c))`: one row
    /// per pair `i < j`, one column per basis vector.
    pub fn contraction_matrix(&self) -> IntMatrix {
        let b = self.beta;
        let pairs: Vec<(usize, usize)> = (0..b)
            .flat_map(|i| (i + 1..b).map(move |j| (i, j)))
            .collect();
        let mut m = IntMatrix::zeros(pairs.len(), b);
        for (r, &(i, j)) in pairs.iter().enumerate() {
            for c in 0..b {
                m.set(r, c, self.coeff([i, j, c]));
            }
        }
        m
    }

    /// Rank of the kernel of cup product `∧²H¹ → H²`.
    pub fn cup_kernel_rank(&self) -> usize {
        let b = self.beta;
        b * b.saturating_sub(1) / 2 - zlinalg::rank(&self.contraction_matrix())
    }

    /// Matrix of `λ ↦ λ ∧ f` from `H*` to `∧⁴H*`: one row per increasing
    /// 4-subset, one column per coordinate of `λ`.
    pub fn wedge_matrix(&self) -> IntMatrix {
        let b = self.beta;
        let mut quads = Vec::new();
        for a in 0..b {
            for bb in a + 1..b {
                for c in bb + 1..b {
                    for d in c + 1..b {
                        quads.push([a, bb, c, d]);
                    }
                }
            }
        }
        let mut m = IntMatrix::zeros(quads.len(), b);
        for (r, q) in quads.iter().enumerate() {
            for (pos, &idx) in q.iter().enumerate() {
                let rest: Vec<usize> = q.iter().copied().filter(|&x| x != idx).collect();
                let mut c = self.coeff([rest[0], rest[1], rest[2]]);
                if pos % 2 == 1 {
                    c = -c;
                }
                m.set(r, idx, c);
            }
        }
        m
    }

    /// Largest absolute coefficient, zero for the zero form.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn to_descriptor(&self) -> FormDescriptor {
        FormDescriptor {
            beta: self.beta,
            monomials: self
                .coeffs
                .iter()
                .map(|(t, c)| {
                    let c = i64::try_from(c).expect("coefficient fits in i64");
                    [t[0] as i64 + 1, t[1] as i64 + 1, t[2] as i64 + 1, c]
                })
                .collect(),
        }
    }
}

/// JSON form descriptor: `{"beta": 6, "monomials": [[1,2,3,1], …]}`, 1-based
/// indices with the coefficient last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDescriptor {
    pub beta: usize,
    pub monomials: Vec<[i64; 4]>,
}

impl TryFrom<&FormDescriptor> for AlternatingForm3 {
    type Error = Error;

    fn try_from(d: &FormDescriptor) -> Result<Self> {
        let mut monomials = Vec::with_capacity(d.monomials.len());
        for &[i, j, k, c] in &d.monomials {
            let idx = |x: i64| -> Result<usize> {
                if x < 1 || x as usize > d.beta {
                    Err(Error::Invalid(format!(
                        "monomial index {x} out of range 1..={}",
                        d.beta
                    )))
                } else {
                    Ok(x as usize - 1)
                }
            };
            monomials.push(([idx(i)?, idx(j)?, idx(k)?], BigInt::from(c)));
        }
        AlternatingForm3::from_monomials(d.beta, monomials)
    }
}
