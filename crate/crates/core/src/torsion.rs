//! Finite abelian groups and `Q/Z`-valued linking pairings.
//!
//! If `M` embeds then its torsion `T_M ≅ T_X ⊕ T_Y` with `T_X ≅ T_Y`, each
//! summand self-annihilating under the linking pairing. So `T_M` must be a
//! direct double and the pairing must be hyperbolic.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::zlinalg::{self, IntMatrix};
use crate::{Error, Result};

/// Default bound on `|G|` for [`is_hyperbolic`].
pub const DEFAULT_ORDER_BOUND: u64 = 10_000;

/// A finite abelian group `⊕ Z/dᵢ` with `d₁ | d₂ | …`, all `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteAbelian {
    #[serde(serialize_with = "ser_bigints")]
    invariant_factors: Vec<BigInt>,
}

pub(crate) fn ser_bigints<S: serde::Serializer>(
    v: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl FiniteAbelian {
    pub fn trivial() -> Self {
        FiniteAbelian {
            invariant_factors: Vec::new(),
        }
    }

    /// The group `⊕ Z/nᵢ` for arbitrary positive orders, normalized to
    /// invariant factors. Orders equal to 1 contribute nothing.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Result<Self> {
        if let Some(bad) = orders.iter().find(|n| !n.is_positive()) {
            return Err(Error::Invalid(format!(
                "cyclic order must be positive, got {bad}"
            )));
        }
        let k = orders.len();
        let mut diag = IntMatrix::zeros(k, k);
        for (i, n) in orders.iter().enumerate() {
            diag.set(i, i, n.clone());
        }
        let snf = zlinalg::smith_normal_form(&diag);
        Ok(FiniteAbelian {
            invariant_factors: snf.diagonal.into_iter().filter(|d| !d.is_one()).collect(),
        })
    }

    pub fn from_u64(orders: &[u64]) -> Result<Self> {
        Self::from_cyclic_orders(&orders.iter().map(|&n| BigInt::from(n)).collect::<Vec<_>>())
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// True iff `G ≅ τ ⊕ τ` for some `τ`. Invariant factors are unique, so
    /// this holds exactly when they come in equal consecutive pairs.
    pub fn is_direct_double(&self) -> bool {
        self.invariant_factors.len().is_multiple_of(2)
            && self.invariant_factors.chunks(2).all(|p| p[0] == p[1])
    }

    /// The `τ` with `G ≅ τ ⊕ τ`, if any.
    pub fn half(&self) -> Option<FiniteAbelian> {
        self.is_direct_double().then(|| FiniteAbelian {
            invariant_factors: self.invariant_factors.iter().step_by(2).cloned().collect(),
        })
    }
}

impl std::fmt::Display for FiniteAbelian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// `Z^betti ⊕ torsion`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub betti: usize,
    pub torsion: FiniteAbelian,
}

/// Homology of the cokernel of an integer relation matrix (rows are relations).
pub fn homology_of_relations(rel: &IntMatrix) -> Homology {
    let snf = zlinalg::smith_normal_form(rel);
    let rank = snf.rank();
    let torsion = FiniteAbelian::from_cyclic_orders(&snf.diagonal[..rank])
        .expect("nonzero Smith entries are positive");
    Homology {
        betti: rel.cols() - rank,
        torsion,
    }
}

/// Free function form of [`FiniteAbelian::is_direct_double`].
pub fn is_direct_double(g: &FiniteAbelian) -> bool {
    g.is_direct_double()
}

/// A symmetric pairing on `⊕ Z/nᵢ` given by its values on generator pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingPairing {
    orders: Vec<u64>,
    gram: Vec<Vec<BigRational>>,
}

fn reduce_mod_one(q: &BigRational) -> BigRational {
    q - q.floor()
}

impl LinkingPairing {
    /// Checks symmetry mod 1 and `nᵢ·ℓ(gᵢ, gⱼ) ∈ Z`; entries are reduced into `[0, 1)`.
    pub fn new(orders: Vec<u64>, gram: Vec<Vec<BigRational>>) -> Result<Self> {
        let k = orders.len();
        if gram.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: gram.len(),
            });
        }
        if let Some(r) = gram.iter().find(|r| r.len() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: r.len(),
            });
        }
        if orders.iter().any(|&n| n < 2) {
            return Err(Error::Invalid("generator orders must be at least 2".into()));
        }
        let gram: Vec<Vec<BigRational>> = gram
            .iter()
            .map(|r| r.iter().map(reduce_mod_one).collect())
            .collect();
        for i in 0..k {
            for j in 0..k {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
                if !(&gram[i][j] * BigInt::from(orders[i])).is_integer() {
                    return Err(Error::Invalid(format!(
                        "ℓ(g{}, g{}) = {} is not killed by the order {}",
                        i + 1,
                        j + 1,
                        gram[i][j],
                        orders[i]
                    )));
                }
            }
        }
        Ok(LinkingPairing { orders, gram })
    }

    /// The pairing `ℓ((a,b),(c,d)) = (ad + bc)/n` on `Z/n ⊕ Z/n`.
    pub fn standard_hyperbolic(n: u64) -> Result<Self> {
        let zero = BigRational::zero();
        let off = BigRational::new(BigInt::one(), BigInt::from(n));
        Self::new(
            vec![n, n],
            vec![vec![zero.clone(), off.clone()], vec![off, zero]],
        )
    }

    /// `Z/n` with `ℓ(1,1) = q/n`.
    pub fn cyclic(n: u64, q: i64) -> Result<Self> {
        Self::new(
            vec![n],
            vec![vec![BigRational::new(BigInt::from(q), BigInt::from(n))]],
        )
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn gram(&self) -> &[Vec<BigRational>] {
        &self.gram
    }

    pub fn group(&self) -> FiniteAbelian {
        FiniteAbelian::from_u64(&self.orders).expect("orders are at least 2")
    }

    /// `|G|`, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        self.orders
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
    }

    /// `ℓ(x, y)` in `[0, 1)` for coordinate vectors.
    pub fn evaluate(&self, x: &[i64], y: &[i64]) -> BigRational {
        let mut s = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                s += &self.gram[i][j] * BigInt::from(xi * yj);
            }
        }
        reduce_mod_one(&s)
    }

    /// The pairing is nondegenerate: only `0` pairs trivially with everything.
    pub fn is_nondegenerate(&self) -> Option<bool> {
        let table = PairingTable::new(self, self.order()?);
        Some((1..table.size).all(|x| (0..table.size).any(|y| table.pair(x, y) != 0)))
    }
}

/// Generators of complementary self-annihilating subgroups `N`, `P` with
/// `G = N ⊕ P` and `ℓ` restricting to a perfect pairing `N × P → Q/Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperbolicWitness {
    pub lagrangian: Vec<Vec<i64>>,
    pub complement: Vec<Vec<i64>>,
}

/// Elements of `⊕ Z/nᵢ` indexed in mixed radix, with `ℓ` scaled by a common
/// denominator so pairings are integers mod `denominator`.
struct PairingTable {
    orders: Vec<u64>,
    size: usize,
    denominator: u64,
    scaled: Vec<Vec<u64>>,
}

impl PairingTable {
    fn new(p: &LinkingPairing, size: u64) -> Self {
        let denominator = p
            .gram
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
            .to_u64()
            .expect("denominators divide the group exponent");
        let scaled = p
            .gram
            .iter()
            .map(|r| {
                r.iter()
                    .map(|q| {
                        (q * BigInt::from(denominator))
                            .to_integer()
                            .to_u64()
                            .expect("in [0, denominator)")
                    })
                    .collect()
            })
            .collect();
        PairingTable {
            orders: p.orders.clone(),
            size: size as usize,
            denominator,
            scaled,
        }
    }

    fn coords(&self, mut x: usize) -> Vec<u64> {
        let mut c = vec![0; self.orders.len()];
        for i in (0..self.orders.len()).rev() {
            let n = self.orders[i] as usize;
            c[i] = (x % n) as u64;
            x /= n;
        }
        c
    }

    fn index(&self, c: &[u64]) -> usize {
        c.iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&x, &n)| acc * n as usize + (x % n) as usize)
    }

    fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.coords(x), self.coords(y));
        let s: Vec<u64> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
        self.index(&s)
    }

    fn pair(&self, x: usize, y: usize) -> u64 {
        let (a, b) = (self.coords(x), self.coords(y));
        let d = self.denominator as u128;
        let mut s: u128 = 0;
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                s = (s + (*ai as u128) * (self.scaled[i][j] as u128) % d * (*bj as u128)) % d;
            }
        }
        s as u64
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn new(n: usize) -> Self {
        Bitset(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn has(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Closure of `base ∪ {x}` under addition.
fn extend_subgroup(t: &PairingTable, base: &Bitset, x: usize) -> Bitset {
    let mut out = base.clone();
    let elems: Vec<usize> = base.ones().collect();
    let mut multiple = x;
    while !out.has(multiple) {
        for &b in &elems {
            out.set(t.add(b, multiple));
        }
        multiple = t.add(multiple, x);
    }
    out
}

/// Isotropic subgroups of order exactly `target`, each found once.
fn isotropic_subgroups(t: &PairingTable, target: usize) -> Vec<(Bitset, Vec<usize>)> {
    let isotropic_elems: Vec<usize> = (1..t.size).filter(|&x| t.pair(x, x) == 0).collect();
    let mut zero = Bitset::new(t.size);
    zero.set(0);
    let mut seen = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([(zero, Vec::new())]);
    let mut out = Vec::new();
    while let Some((sub, gens)) = queue.pop_front() {
        let count = sub.count();
        if count == target {
            out.push((sub, gens));
            continue;
        }
        for &x in &isotropic_elems {
            if sub.has(x) || sub.ones().any(|y| t.pair(x, y) != 0) {
                continue;
            }
            let bigger = extend_subgroup(t, &sub, x);
            if bigger.count() <= target
                && target.is_multiple_of(bigger.count())
                && seen.insert(bigger.clone())
            {
                let mut g = gens.clone();
                g.push(x);
                queue.push_back((bigger, g));
            }
        }
    }
    out
}

fn exact_sqrt(n: u64) -> Option<u64> {
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

/// Exhaustive search for a hyperbolic splitting, for `|G| ≤ bound`.
///
/// `None` is a proof that the pairing is not hyperbolic.
pub fn is_hyperbolic_bounded(p: &LinkingPairing, bound: u64) -> Result<Option<HyperbolicWitness>> {
    let order = p.order().filter(|&n| n <= bound).ok_or(Error::TooLarge {
        order: p.order().unwrap_or(u64::MAX),
        bound,
    })?;
    let Some(half) = exact_sqrt(order) else {
        return Ok(None);
    };
    let t = PairingTable::new(p, order);
    let lagrangians = isotropic_subgroups(&t, half as usize);
    for (n_set, n_gens) in &lagrangians {
        for (p_set, p_gens) in &lagrangians {
            let disjoint = p_set.ones().all(|x| x == 0 || !n_set.has(x));
            if !disjoint {
                continue;
            }
            // |P| = |N| = |Hom(N, Q/Z)|, so injectivity of P → Hom(N, Q/Z) suffices.
            let perfect = p_set
                .ones()
                .all(|x| x == 0 || n_set.ones().any(|y| t.pair(x, y) != 0));
            if perfect {
                let to_coords = |g: &[usize]| -> Vec<Vec<i64>> {
                    g.iter()
                        .map(|&x| t.coords(x).into_iter().map(|c| c as i64).collect())
                        .collect()
                };
                return Ok(Some(HyperbolicWitness {
                    lagrangian: to_coords(n_gens),
                    complement: to_coords(p_gens),
                }));
            }
        }
    }
    Ok(None)
}

/// [`is_hyperbolic_bounded`] with [`DEFAULT_ORDER_BOUND`].
pub fn is_hyperbolic(p: &LinkingPairing) -> Result<Option<HyperbolicWitness>> {
    is_hyperbolic_bounded(p, DEFAULT_ORDER_BOUND)
}

/// Independent check of a witness: both subgroups are self-annihilating,
/// have order `√|G|`, meet trivially, and pair perfectly.
pub fn verify_hyperbolic_witness(p: &LinkingPairing, w: &HyperbolicWitness) -> bool {
    let Some(order) = p.order() else { return false };
    let span = |gens: &[Vec<i64>]| -> HashSet<Vec<i64>> {
        let mut set = HashSet::from([vec![0i64; p.orders.len()]]);
        loop {
            let next: HashSet<Vec<i64>> = set
                .iter()
                .flat_map(|a| {
                    gens.iter().map(move |g| {
                        a.iter()
                            .zip(g)
                            .zip(&p.orders)
                            .map(|((x, y), &n)| (x + y).rem_euclid(n as i64))
                            .collect()
                    })
                })
                .chain(set.iter().cloned())
                .collect();
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    };
    let n = span(&w.lagrangian);
    let c = span(&w.complement);
    let zero = vec![0i64; p.orders.len()];
    let iso = |s: &HashSet<Vec<i64>>| {
        s.iter()
            .all(|a| s.iter().all(|b| p.evaluate(a, b).is_zero()))
    };
    let sizes = (n.len() as u64) * (c.len() as u64) == order && n.len() == c.len();
    let meet = n.intersection(&c).all(|x| *x == zero);
    let perfect = c
        .iter()
        .all(|x| *x == zero || n.iter().any(|y| !p.evaluate(x, y).is_zero()));
    sizes && meet && iso(&n) && iso(&c) && perfect
}

/// The linking pairing on the torsion of `coker Q` for a symmetric integer
/// matrix `Q`, with `ℓ(a, b) = aᵀQ⁻¹b mod 1` on the torsion generators
/// read off from the Smith form.
pub fn linking_from_matrix(q: &IntMatrix) -> Result<Option<LinkingPairing>> {
    if !q.is_square() {
        return Err(Error::NotSquare {
            rows: q.rows(),
            cols: q.cols(),
        });
    }
    if !q.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let snf = zlinalg::smith_normal_form(q);
    let idx: Vec<usize> = (0..snf.diagonal.len())
        .filter(|&i| !snf.diagonal[i].is_zero() && !snf.diagonal[i].is_one())
        .collect();
    if idx.is_empty() {
        return Ok(None);
    }
    let mut orders = Vec::new();
    for &i in &idx {
        orders.push(snf.diagonal[i].to_u64().ok_or(Error::TooLarge {
            order: u64::MAX,
            bound: u64::MAX,
        })?);
    }
    // Generator i is the class of column i of U⁻¹; pairing (Vᵀ x_i)_j / d_j.
    let gram = idx
        .iter()
        .map(|&i| {
            let xi = snf.left_inv.column(i);
            idx.iter()
                .map(|&j| {
                    let vj: BigInt = (0..q.rows()).map(|k| &xi[k] * snf.right.get(k, j)).sum();
                    BigRational::new(vj, snf.diagonal[j].clone())
                })
                .collect()
        })
        .collect();
    LinkingPairing::new(orders, gram).map(Some)
}
