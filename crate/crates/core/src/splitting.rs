//! Splittings `H ≅ A ⊕ B` on which a cup-product 3-form vanishes.
//!
//! If `M` embeds with complementary regions `X`, `Y` then `H¹(M)` splits as
//! `H¹(X) ⊕ H¹(Y)` and the 3-form vanishes on `∧³` of each summand. This
//! module searches for such splittings within a coefficient radius, and
//! provides the two certificates that turn a failed search into a proof:
//! the exact solver for corank-one summands and the closed-form witnesses
//! for the rank-6 counterexample form.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::forms::AlternatingForm3;
use crate::zlinalg::{self, IntMatrix};
use crate::{Error, Result};

/// Default number of candidate vectors examined by [`find_splitting`].
pub const DEFAULT_BUDGET: u64 = 4_000_000;

/// A surjection `λ = Σ λᵢ eᵢ* : Z^β → Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Epimorphism {
    lambda: Vec<BigInt>,
}

impl Epimorphism {
    pub fn new(lambda: Vec<BigInt>) -> Result<Self> {
        if !zlinalg::gcd_of(&lambda).is_one() {
            return Err(Error::NotPrimitive);
        }
        Ok(Epimorphism { lambda })
    }

    pub fn from_i64(lambda: &[i64]) -> Result<Self> {
        Self::new(zlinalg::to_big(lambda))
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.lambda
    }

    pub fn beta(&self) -> usize {
        self.lambda.len()
    }

    pub fn negated(&self) -> Self {
        Epimorphism {
            lambda: self.lambda.iter().map(|x| -x).collect(),
        }
    }

    pub fn apply(&self, v: &[BigInt]) -> BigInt {
        self.lambda.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    fn as_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(std::slice::from_ref(&self.lambda), self.lambda.len())
            .expect("single row of matching width")
    }

    /// Saturated basis of `Ker(λ)`, rank `β − 1`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        zlinalg::kernel_basis(&self.as_matrix())
    }

    /// A vector `s` with `λ(s) = 1`.
    pub fn section(&self) -> Vec<BigInt> {
        let snf = zlinalg::smith_normal_form(&self.as_matrix());
        let u = snf.left.get(0, 0).clone();
        snf.right.column(0).into_iter().map(|x| x * &u).collect()
    }
}

/// True iff `f` vanishes on `∧³ Ker(λ)`.
pub fn vanishes_on_kernel(f: &AlternatingForm3, lam: &Epimorphism) -> Result<bool> {
    if lam.beta() != f.beta() {
        return Err(Error::DimensionMismatch {
            expected: f.beta(),
            got: lam.beta(),
        });
    }
    Ok(f.vanishes_on(&lam.kernel_basis()))
}

fn is_primitive_normalized(v: &[i64]) -> bool {
    match v.iter().find(|&&x| x != 0) {
        Some(&first) if first > 0 => v.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1,
        _ => false,
    }
}

/// Odometer over `[-r, r]^n` in lexicographic order (first coordinate most
/// significant), yielding primitive vectors whose first nonzero entry is positive.
#[derive(Clone, Debug)]
pub struct LexPrimitives {
    radius: i64,
    next: Option<Vec<i64>>,
}

impl LexPrimitives {
    pub fn new(dim: usize, radius: u32) -> Self {
        let r = radius as i64;
        LexPrimitives {
            radius: r,
            next: (dim > 0 && r > 0).then(|| vec![-r; dim]),
        }
    }
}

fn odometer_step(v: &mut [i64], lo: i64, hi: i64) -> bool {
    for x in v.iter_mut().rev() {
        if *x < hi {
            *x += 1;
            return true;
        }
        *x = lo;
    }
    false
}

impl Iterator for LexPrimitives {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            let cur = self.next.as_mut()?;
            let out = cur.clone();
            if !odometer_step(cur, -self.radius, self.radius) {
                self.next = None;
            }
            if is_primitive_normalized(&out) {
                return Some(out);
            }
        }
    }
}

/// Like [`LexPrimitives`], but shell by shell in the sup-norm: all vectors of
/// norm 1 first (lexicographically), then norm 2, and so on up to the radius.
#[derive(Clone, Debug)]
pub struct GradedPrimitives {
    dim: usize,
    radius: i64,
    shell: i64,
    inner: Option<Vec<i64>>,
}

impl GradedPrimitives {
    pub fn new(dim: usize, radius: u32) -> Self {
        GradedPrimitives {
            dim,
            radius: radius as i64,
            shell: 1,
            inner: (dim > 0 && radius > 0).then(|| vec![-1; dim]),
        }
    }
}

impl Iterator for GradedPrimitives {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            let s = self.shell;
            let cur = self.inner.as_mut()?;
            let out = cur.clone();
            if !odometer_step(cur, -s, s) {
                self.shell += 1;
                self.inner = (self.shell <= self.radius).then(|| vec![-self.shell; self.dim]);
            }
            if out.iter().any(|x| x.abs() == s) && is_primitive_normalized(&out) {
                return Some(out);
            }
        }
    }
}

const EPI_CHUNK: usize = 4096;

/// First primitive `λ` (lexicographic, `|λᵢ| ≤ radius`, up to sign) with
/// `f` vanishing on `∧³ Ker(λ)`. `None` only means "not within the radius".
pub fn search_split_epi(f: &AlternatingForm3, radius: u32) -> Option<Epimorphism> {
    let mut it = LexPrimitives::new(f.beta(), radius);
    loop {
        let chunk: Vec<Vec<i64>> = it.by_ref().take(EPI_CHUNK).collect();
        if chunk.is_empty() {
            return None;
        }
        let hit = chunk.par_iter().find_first(|v| {
            let lam = Epimorphism::from_i64(v).expect("enumerator yields primitive vectors");
            f.vanishes_on(&lam.kernel_basis())
        });
        if let Some(v) = hit {
            return Some(Epimorphism::from_i64(v).expect("primitive"));
        }
    }
}

/// Exact answer to the corank-one splitting problem.
///
/// For `λ ≠ 0`, `f` vanishes on `∧³ Ker(λ)` iff `λ ∧ f = 0` in `∧⁴`, which is
/// linear in `λ`. The admissible `λ` therefore form the integer kernel of
/// [`AlternatingForm3::wedge_matrix`]; an empty kernel proves no such
/// epimorphism exists at any radius.
pub fn exact_split_epi(f: &AlternatingForm3) -> Option<Epimorphism> {
    if f.beta() == 0 {
        return None;
    }
    let kernel = zlinalg::kernel_basis(&f.wedge_matrix());
    let v = kernel.into_iter().next()?;
    let lam =
        Epimorphism::new(v).expect("kernel basis vectors of a saturated lattice are primitive");
    Some(normalize_sign(lam))
}

fn normalize_sign(lam: Epimorphism) -> Epimorphism {
    match lam.lambda.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => lam.negated(),
        _ => lam,
    }
}

/// Which coefficient of `λ` drove the choice of summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Beta6Case {
    /// `λ₆ ≠ 0`: `f_j = λ₆e_j − λ_je₆`, `j = 1, 2, 3`; value `λ₆³`.
    Lambda6,
    /// `λ₃ ≠ 0`: pivot on 3 over indices 1, 5, 6; value `λ₃³`.
    Lambda3,
    /// `λ₄ ≠ 0`: pivot on 4 over indices 1, 5, 6; value `λ₄³`.
    Lambda4,
    /// `λ₃ = λ₄ = λ₆ = 0`, `λ₁ ≠ 0`: `⟨g₂, e₄, g₅⟩`; value `λ₁²`.
    Lambda1,
    /// additionally `λ₁ = 0`, `λ₂ ≠ 0`: `⟨g₁, g₅, e₆⟩`, `g_j = λ₂e_j − λ_je₂`; value `λ₂²`.
    Lambda2,
    /// only `λ₅ ≠ 0`: `⟨g₁, g₂, e₃⟩`, `g_j = λ₅e_j − λ_je₅`; value `λ₅²`.
    Lambda5,
}

/// A rank-3 summand of `Ker(λ)` on which the counterexample form is nonzero.
#[derive(Clone, Debug)]
pub struct Beta6Witness {
    pub case: Beta6Case,
    /// The explicit generators from the case analysis.
    pub generators: [Vec<BigInt>; 3],
    /// Saturated basis of the direct summand containing the generators.
    pub summand: Vec<Vec<BigInt>>,
    /// `f(g₁, g₂, g₃)` evaluated on the generators.
    pub value: BigInt,
    /// The closed form (`λ₆³`, `λ₃³`, `λ₄³`, `λ₁²`, `λ₂²` or `λ₅²`).
    pub closed_form: BigInt,
}

/// Closed-form witness that `λ` does not split the counterexample form.
pub fn beta6_witness(f: &AlternatingForm3, lam: &Epimorphism) -> Result<Beta6Witness> {
    if *f != AlternatingForm3::counterexample6() {
        return Err(Error::WrongForm);
    }
    if lam.beta() != 6 {
        return Err(Error::DimensionMismatch {
            expected: 6,
            got: lam.beta(),
        });
    }
    let l = |i: usize| &lam.lambda[i - 1];
    let e = |i: usize| -> Vec<BigInt> { (1..=6).map(|j| BigInt::from((i == j) as i64)).collect() };
    // λ_p e_j − λ_j e_p
    let pivot = |p: usize, j: usize| -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); 6];
        v[j - 1] += l(p);
        v[p - 1] -= l(j);
        v
    };
    let nz = |i: usize| !l(i).is_zero();
    let (case, generators, closed_form) = if nz(6) {
        (
            Beta6Case::Lambda6,
            [pivot(6, 1), pivot(6, 2), pivot(6, 3)],
            l(6).pow(3),
        )
    } else if nz(3) {
        (
            Beta6Case::Lambda3,
            [pivot(3, 1), pivot(3, 5), pivot(3, 6)],
            l(3).pow(3),
        )
    } else if nz(4) {
        (
            Beta6Case::Lambda4,
            [pivot(4, 1), pivot(4, 5), pivot(4, 6)],
            l(4).pow(3),
        )
    } else if nz(1) {
        (
            Beta6Case::Lambda1,
            [pivot(1, 2), e(4), pivot(1, 5)],
            l(1).pow(2),
        )
    } else if nz(2) {
        (
            Beta6Case::Lambda2,
            [pivot(2, 1), pivot(2, 5), e(6)],
            l(2).pow(2),
        )
    } else {
        (
            Beta6Case::Lambda5,
            [pivot(5, 1), pivot(5, 2), e(3)],
            l(5).pow(2),
        )
    };
    let value = f.evaluate_unchecked(&generators[0], &generators[1], &generators[2]);
    let summand = zlinalg::saturate(&generators, 6)?;
    Ok(Beta6Witness {
        case,
        generators,
        summand,
        value,
        closed_form,
    })
}

/// A splitting `Z^β = A ⊕ B` with ranks `γ` and `β − γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    #[serde(serialize_with = "ser_rows")]
    pub a_basis: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "ser_rows")]
    pub b_basis: Vec<Vec<BigInt>>,
    /// Both restrictions vanish and `A ∪ B` is a basis of `Z^β`.
    pub valid: bool,
}

fn ser_rows<S: serde::Serializer>(
    rows: &[Vec<BigInt>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        let r: Vec<String> = r.iter().map(ToString::to_string).collect();
        seq.serialize_element(&r)?;
    }
    seq.end()
}

impl SplitWitness {
    fn new(f: &AlternatingForm3, a_basis: Vec<Vec<BigInt>>, b_basis: Vec<Vec<BigInt>>) -> Self {
        let mut w = SplitWitness {
            a_basis,
            b_basis,
            valid: false,
        };
        w.valid = w.revalidate(f);
        w
    }

    /// Re-checks the witness from scratch: both restrictions are zero forms
    /// and the concatenated bases have determinant `±1`.
    pub fn revalidate(&self, f: &AlternatingForm3) -> bool {
        let n = f.beta();
        if self.a_basis.len() + self.b_basis.len() != n {
            return false;
        }
        let all: Vec<Vec<BigInt>> = self.a_basis.iter().chain(&self.b_basis).cloned().collect();
        let Ok(m) = IntMatrix::from_rows(&all, n) else {
            return false;
        };
        let unimodular = zlinalg::det(&m).is_ok_and(|d| d.magnitude().is_one());
        unimodular
            && f.restrict(&self.a_basis).is_ok_and(|r| r.is_zero())
            && f.restrict(&self.b_basis).is_ok_and(|r| r.is_zero())
    }
}

/// Outcome of a bounded splitting search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitSearch {
    Found(SplitWitness),
    /// The radius was exhausted.
    NotFound,
    /// The candidate budget ran out before the radius was exhausted.
    BudgetExhausted,
}

impl SplitSearch {
    pub fn witness(self) -> Option<SplitWitness> {
        match self {
            SplitSearch::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// Bounded search for a splitting with `rank A = γ`; see [`find_splitting_with_budget`].
pub fn find_splitting(
    f: &AlternatingForm3,
    gamma: usize,
    radius: u32,
) -> Result<Option<SplitWitness>> {
    Ok(find_splitting_with_budget(f, gamma, radius, DEFAULT_BUDGET)?.witness())
}

fn unit_rows(range: std::ops::Range<usize>, n: usize) -> Vec<Vec<BigInt>> {
    range
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect()
}

/// Deterministic search for `Z^β = A ⊕ B`, `rank A = γ`, with the form
/// vanishing on `∧³A` and `∧³B`.
///
/// Summands are spanned by primitive vectors with entries bounded by
/// `radius`, taken in [`GradedPrimitives`] order. A side of rank ≤ 2 is
/// unconstrained and is taken as a complement of the other. Corank-one sides
/// come from [`search_split_epi`]. `budget` caps the number of candidate
/// vectors examined.
pub fn find_splitting_with_budget(
    f: &AlternatingForm3,
    gamma: usize,
    radius: u32,
    budget: u64,
) -> Result<SplitSearch> {
    let n = f.beta();
    if gamma > n {
        return Err(Error::BadGamma { beta: n, gamma });
    }
    let witness = |a: Vec<Vec<BigInt>>, b: Vec<Vec<BigInt>>| {
        Ok(SplitSearch::Found(SplitWitness::new(f, a, b)))
    };
    if f.is_zero() || (gamma <= 2 && n - gamma <= 2) {
        return witness(unit_rows(0..gamma, n), unit_rows(gamma..n, n));
    }
    if gamma == n || gamma == 0 {
        return Ok(SplitSearch::NotFound);
    }
    if gamma == n - 1 || gamma == 1 {
        let Some(lam) = search_split_epi(f, radius) else {
            return Ok(SplitSearch::NotFound);
        };
        let kernel = lam.kernel_basis();
        let line = vec![lam.section()];
        return if gamma == n - 1 {
            witness(kernel, line)
        } else {
            witness(line, kernel)
        };
    }
    let mut search = Backtrack {
        f,
        n,
        candidates: GradedPrimitives::new(n, radius),
        cache: Vec::new(),
        exhausted: false,
        budget,
        spent: 0,
    };
    // Search the side that carries a constraint first; a rank ≤ 2 partner is free.
    let (first_rank, other_rank) = if n - gamma <= 2 {
        (gamma, n - gamma)
    } else if gamma <= 2 {
        (n - gamma, gamma)
    } else {
        (gamma, n - gamma)
    };
    let mut seen = HashSet::new();
    let mut found = None;
    let outcome = search.choose(first_rank, &mut Vec::new(), 0, &mut |s, tuple| {
        let vectors: Vec<Vec<BigInt>> = tuple.iter().map(|&i| s.vector(i)).collect();
        let summand = zlinalg::saturate(&vectors, s.n).expect("tuple is independent");
        if !seen.insert(summand.clone()) {
            return Ok(false);
        }
        let partner = if other_rank <= 2 {
            Some(zlinalg::complement_basis(&summand, s.n).expect("saturated summand"))
        } else {
            s.complement_search(&summand, other_rank)?
        };
        if let Some(partner) = partner {
            found = Some((summand, partner));
            return Ok(true);
        }
        Ok(false)
    });
    match outcome {
        Err(OutOfBudget) => Ok(SplitSearch::BudgetExhausted),
        Ok(_) => match found {
            Some((first, partner)) if first_rank == gamma => witness(first, partner),
            Some((first, partner)) => witness(partner, first),
            None => Ok(SplitSearch::NotFound),
        },
    }
}

#[derive(Debug)]
struct OutOfBudget;

struct Backtrack<'a> {
    f: &'a AlternatingForm3,
    n: usize,
    candidates: GradedPrimitives,
    cache: Vec<Vec<BigInt>>,
    exhausted: bool,
    budget: u64,
    spent: u64,
}

impl Backtrack<'_> {
    /// Candidate `i`, generating lazily; `None` past the end of the radius.
    fn get(&mut self, i: usize) -> Option<&Vec<BigInt>> {
        while self.cache.len() <= i && !self.exhausted {
            match self.candidates.next() {
                Some(v) => self.cache.push(zlinalg::to_big(&v)),
                None => self.exhausted = true,
            }
        }
        self.cache.get(i)
    }

    fn vector(&self, i: usize) -> Vec<BigInt> {
        self.cache[i].clone()
    }

    fn tick(&mut self) -> std::result::Result<(), OutOfBudget> {
        self.spent += 1;
        if self.spent > self.budget {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    /// Enumerates increasing index tuples of independent candidates on
    /// which the form vanishes, calling `accept` on each full tuple until it
    /// returns `true`.
    fn choose(
        &mut self,
        size: usize,
        tuple: &mut Vec<usize>,
        start: usize,
        accept: &mut dyn FnMut(&mut Self, &[usize]) -> std::result::Result<bool, OutOfBudget>,
    ) -> std::result::Result<bool, OutOfBudget> {
        if tuple.len() == size {
            return accept(self, tuple);
        }
        let mut i = start;
        while self.get(i).is_some() {
            self.tick()?;
            if self.extends(tuple, i) {
                tuple.push(i);
                let done = self.choose(size, tuple, i + 1, accept)?;
                tuple.pop();
                if done {
                    return Ok(true);
                }
            }
            i += 1;
        }
        Ok(false)
    }

    fn extends(&self, tuple: &[usize], i: usize) -> bool {
        let v = &self.cache[i];
        for (a, &ia) in tuple.iter().enumerate() {
            for &ib in &tuple[a + 1..] {
                if !self
                    .f
                    .evaluate_unchecked(&self.cache[ia], &self.cache[ib], v)
                    .is_zero()
                {
                    return false;
                }
            }
        }
        let rows: Vec<Vec<BigInt>> = tuple
            .iter()
            .map(|&j| self.cache[j].clone())
            .chain([v.clone()])
            .collect();
        zlinalg::rank(&IntMatrix::from_rows(&rows, self.n).expect("width")) == rows.len()
    }

    /// Finds `B` of the given rank with `summand ⊕ B = Z^n` and the form
    /// vanishing on `∧³B`.
    fn complement_search(
        &mut self,
        summand: &[Vec<BigInt>],
        rank: usize,
    ) -> std::result::Result<Option<Vec<Vec<BigInt>>>, OutOfBudget> {
        // Coordinates on Z^n / summand: the trailing coordinates of x·V,
        // where U·summand·V = [I 0].
        let snf =
            zlinalg::smith_normal_form(&IntMatrix::from_rows(summand, self.n).expect("width"));
        let k = summand.len();
        let n = self.n;
        let project = |v: &[BigInt]| -> Vec<BigInt> {
            (k..n)
                .map(|j| {
                    v.iter()
                        .enumerate()
                        .map(|(i, x)| x * snf.right.get(i, j))
                        .sum()
                })
                .collect()
        };
        let mut chosen: Vec<usize> = Vec::new();
        let mut projected: Vec<Vec<BigInt>> = Vec::new();
        let found = self.complement_step(rank, &mut chosen, &mut projected, 0, &project)?;
        Ok(found.then(|| {
            let rows: Vec<Vec<BigInt>> = chosen.iter().map(|&i| self.cache[i].clone()).collect();
            zlinalg::hermite_rows(&IntMatrix::from_rows(&rows, self.n).expect("width")).to_rows()
        }))
    }

    fn complement_step(
        &mut self,
        rank: usize,
        chosen: &mut Vec<usize>,
        projected: &mut Vec<Vec<BigInt>>,
        start: usize,
        project: &dyn Fn(&[BigInt]) -> Vec<BigInt>,
    ) -> std::result::Result<bool, OutOfBudget> {
        if chosen.len() == rank {
            return Ok(true);
        }
        let mut i = start;
        while self.get(i).is_some() {
            self.tick()?;
            let p = project(&self.cache[i]);
            projected.push(p);
            let ok = zlinalg::is_saturated(projected, rank).unwrap_or(false) && {
                let v = &self.cache[i];
                chosen.iter().enumerate().all(|(a, &ia)| {
                    chosen[a + 1..].iter().all(|&ib| {
                        self.f
                            .evaluate_unchecked(&self.cache[ia], &self.cache[ib], v)
                            .is_zero()
                    })
                })
            };
            if ok {
                chosen.push(i);
                if self.complement_step(rank, chosen, projected, i + 1, project)? {
                    return Ok(true);
                }
                chosen.pop();
            }
            projected.pop();
            i += 1;
        }
        Ok(false)
    }
}
