//! Cochains on the Nil group `⟨x, y, t | [x, y] = tᵉ, t central⟩`.
//!
//! Elements have the normal form `xᵐyⁿtᵖ`. The 1-cochains `φ_ξ`, `φ_η`, `θ`
//! are primitives for `ξ²`, `η²` and `ξη`, which lets us write down cocycles
//! representing the Massey products `⟨ξ,ξ,η⟩` and `⟨ξ,η,η⟩` and test their
//! independence by restriction to the abelian subgroups `⟨x,t⟩` and `⟨y,t⟩`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::{Error, Result};

/// `xᵐyⁿtᵖ` in the group with parameter `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NilElement {
    pub m: BigInt,
    pub n: BigInt,
    pub p: BigInt,
    e: i64,
}

fn check_e(e: i64) -> Result<()> {
    if e < 1 {
        return Err(Error::BadParameter(format!(
            "Nil group parameter must be ≥ 1, got {e}"
        )));
    }
    Ok(())
}

impl NilElement {
    pub fn new(
        m: impl Into<BigInt>,
        n: impl Into<BigInt>,
        p: impl Into<BigInt>,
        e: i64,
    ) -> Result<Self> {
        check_e(e)?;
        Ok(NilElement {
            m: m.into(),
            n: n.into(),
            p: p.into(),
            e,
        })
    }

    fn raw(m: i64, n: i64, p: i64, e: i64) -> Self {
        NilElement {
            m: m.into(),
            n: n.into(),
            p: p.into(),
            e,
        }
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn identity(e: i64) -> Result<Self> {
        Self::new(0, 0, 0, e)
    }

    pub fn x(e: i64) -> Result<Self> {
        Self::new(1, 0, 0, e)
    }

    pub fn y(e: i64) -> Result<Self> {
        Self::new(0, 1, 0, e)
    }

    /// The central generator `t`.
    pub fn t(e: i64) -> Result<Self> {
        Self::new(0, 0, 1, e)
    }

    /// `[x, y] = xyx⁻¹y⁻¹ = tᵉ`.
    pub fn commutator(e: i64) -> Result<Self> {
        Self::new(0, 0, e, e)
    }

    /// `(m,n,p)·(m′,n′,p′) = (m+m′, n+n′, p+p′−e·n·m′)`.
    pub fn mul(&self, other: &NilElement) -> Result<NilElement> {
        if self.e != other.e {
            return Err(Error::MixedGroups(self.e, other.e));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, o: &NilElement) -> NilElement {
        NilElement {
            m: &self.m + &o.m,
            n: &self.n + &o.n,
            p: &self.p + &o.p - BigInt::from(self.e) * &self.n * &o.m,
            e: self.e,
        }
    }

    pub fn inverse(&self) -> NilElement {
        NilElement {
            m: -&self.m,
            n: -&self.n,
            p: -&self.p - BigInt::from(self.e) * &self.m * &self.n,
            e: self.e,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_zero() && self.n.is_zero() && self.p.is_zero()
    }
}

impl fmt::Display for NilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} y^{} t^{}", self.m, self.n, self.p)
    }
}

/// Free function form of [`NilElement::mul`].
pub fn nil_mul(g: &NilElement, h: &NilElement) -> Result<NilElement> {
    g.mul(h)
}

type Fn1 = dyn Fn(&NilElement) -> BigRational + Send + Sync;
type Fn2 = dyn Fn(&NilElement, &NilElement) -> Result<BigRational> + Send + Sync;

/// An inhomogeneous 1-cochain with trivial rational coefficients.
#[derive(Clone)]
pub struct Cochain1 {
    name: String,
    f: Arc<Fn1>,
}

impl Cochain1 {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&NilElement) -> BigRational + Send + Sync + 'static,
    ) -> Self {
        Cochain1 {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, g: &NilElement) -> BigRational {
        (self.f)(g)
    }
}

impl fmt::Debug for Cochain1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain1({})", self.name)
    }
}

/// An inhomogeneous 2-cochain with trivial rational coefficients.
#[derive(Clone)]
pub struct Cochain2 {
    name: String,
    f: Arc<Fn2>,
}

impl Cochain2 {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&NilElement, &NilElement) -> Result<BigRational> + Send + Sync + 'static,
    ) -> Self {
        Cochain2 {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, g: &NilElement, h: &NilElement) -> Result<BigRational> {
        (self.f)(g, h)
    }

    pub fn add(&self, other: &Cochain2) -> Cochain2 {
        let (a, b) = (self.clone(), other.clone());
        Cochain2::new(format!("{} + {}", self.name, other.name), move |g, h| {
            Ok(a.eval(g, h)? + b.eval(g, h)?)
        })
    }

    pub fn sub(&self, other: &Cochain2) -> Cochain2 {
        let (a, b) = (self.clone(), other.clone());
        Cochain2::new(format!("{} - {}", self.name, other.name), move |g, h| {
            Ok(a.eval(g, h)? - b.eval(g, h)?)
        })
    }
}

impl fmt::Debug for Cochain2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain2({})", self.name)
    }
}

/// The 1-cochains for one value of `e`.
#[derive(Clone, Debug)]
pub struct Cochains {
    pub xi: Cochain1,
    pub eta: Cochain1,
    pub phi_xi: Cochain1,
    pub phi_eta: Cochain1,
    pub theta: Cochain1,
}

fn int(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

fn half_triangle(k: &BigInt) -> BigRational {
    BigRational::new(k * (BigInt::one() - k), BigInt::from(2))
}

/// `ξ = m`, `η = n`, `φ_ξ = m(1−m)/2`, `φ_η = n(1−n)/2`, `θ = −mn − p/e`.
pub fn cochains(e: i64) -> Result<Cochains> {
    check_e(e)?;
    Ok(Cochains {
        xi: Cochain1::new("ξ", |g| int(g.m.clone())),
        eta: Cochain1::new("η", |g| int(g.n.clone())),
        phi_xi: Cochain1::new("φ_ξ", |g| half_triangle(&g.m)),
        phi_eta: Cochain1::new("φ_η", |g| half_triangle(&g.n)),
        theta: Cochain1::new("θ", |g| {
            -int(&g.m * &g.n) - BigRational::new(g.p.clone(), BigInt::from(g.e))
        }),
    })
}

/// `δf(g, h) = f(g) + f(h) − f(gh)`.
pub fn coboundary1(f: &Cochain1) -> Cochain2 {
    let f = f.clone();
    Cochain2::new(format!("δ{}", f.name), move |g, h| {
        let gh = g.mul(h)?;
        Ok(f.eval(g) + f.eval(h) - f.eval(&gh))
    })
}

/// `(u ∪ v)(g, h) = u(g)·v(h)`.
pub fn cup(u: &Cochain1, v: &Cochain1) -> Cochain2 {
    let (u, v) = (u.clone(), v.clone());
    Cochain2::new(format!("{}{}", u.name, v.name), move |g, h| {
        Ok(u.eval(g) * v.eval(h))
    })
}

/// `c₁ = φ_ξη + ξθ` and `c₂ = θη + ξφ_η`, representing `⟨ξ,ξ,η⟩` and `⟨ξ,η,η⟩`.
pub fn triple_product_cocycles(e: i64) -> Result<(Cochain2, Cochain2)> {
    let c = cochains(e)?;
    let c1 = cup(&c.phi_xi, &c.eta).add(&cup(&c.xi, &c.theta));
    let c2 = cup(&c.theta, &c.eta).add(&cup(&c.xi, &c.phi_eta));
    Ok((c1, c2))
}

/// `c(h,k) − c(gh,k) + c(g,hk) − c(g,h)`; zero for a cocycle.
pub fn cocycle_defect(
    c: &Cochain2,
    g: &NilElement,
    h: &NilElement,
    k: &NilElement,
) -> Result<BigRational> {
    let gh = g.mul(h)?;
    let hk = h.mul(k)?;
    Ok(c.eval(h, k)? - c.eval(&gh, k)? + c.eval(g, &hk)? - c.eval(g, h)?)
}

/// `c(g,h) − c(h,g)`.
pub fn antisymmetrization(c: &Cochain2, g: &NilElement, h: &NilElement) -> Result<BigRational> {
    Ok(c.eval(g, h)? - c.eval(h, g)?)
}

/// The two abelian subgroups used for restriction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Subgroup {
    /// `⟨x, t⟩`, elements `(m, 0, p)`.
    XT,
    /// `⟨y, t⟩`, elements `(0, n, p)`.
    YT,
}

impl Subgroup {
    fn element(self, a: i64, p: i64, e: i64) -> NilElement {
        match self {
            Subgroup::XT => NilElement::raw(a, 0, p, e),
            Subgroup::YT => NilElement::raw(0, a, p, e),
        }
    }
}

/// On `⟨a, t⟩ ≅ Z²` the class of a 2-cocycle is its antisymmetrization,
/// an alternating form `k·det`. Returns `k` after checking the identity
/// `c(g,h) − c(h,g) = k·(a_g p_h − p_g a_h)` on the grid `[−radius, radius]²`.
pub fn restricted_class(
    c: &Cochain2,
    sub: Subgroup,
    e: i64,
    radius: i64,
) -> Result<Option<BigRational>> {
    check_e(e)?;
    let k = antisymmetrization(c, &sub.element(1, 0, e), &sub.element(0, 1, e))?;
    let range = -radius..=radius;
    for a in range.clone() {
        for p in range.clone() {
            for a2 in range.clone() {
                for p2 in range.clone() {
                    let (g, h) = (sub.element(a, p, e), sub.element(a2, p2, e));
                    let lhs = antisymmetrization(c, &g, &h)?;
                    if lhs != &k * BigInt::from(a * p2 - p * a2) {
                        return Ok(None);
                    }
                }
            }
        }
    }
    Ok(Some(k))
}

/// Grid radius used by [`restriction_pairing`].
pub const RESTRICTION_GRID: i64 = 3;

/// Rows `c₁, c₂`; columns `⟨x,t⟩, ⟨y,t⟩`; entries the restricted classes.
/// `None` if some restriction is not of the expected alternating shape.
pub fn restriction_pairing(e: i64) -> Result<Option<[[BigRational; 2]; 2]>> {
    let (c1, c2) = triple_product_cocycles(e)?;
    let mut out: [[BigRational; 2]; 2] = Default::default();
    for (i, c) in [&c1, &c2].into_iter().enumerate() {
        for (j, sub) in [Subgroup::XT, Subgroup::YT].into_iter().enumerate() {
            match restricted_class(c, sub, e, RESTRICTION_GRID)? {
                Some(k) => out[i][j] = k,
                None => return Ok(None),
            }
        }
    }
    Ok(Some(out))
}

/// `c₁` restricts nontrivially to `⟨x,t⟩` and trivially to `⟨y,t⟩`, and `c₂`
/// the other way round; so the two classes are linearly independent.
pub fn restriction_independence(e: i64) -> Result<bool> {
    Ok(match restriction_pairing(e)? {
        Some(m) => {
            !m[0][0].is_zero() && m[0][1].is_zero() && m[1][0].is_zero() && !m[1][1].is_zero()
        }
        None => false,
    })
}

/// Outcome of one randomized identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn random_element(rng: &mut impl Rng, bound: i64, e: i64) -> NilElement {
    NilElement::raw(
        rng.gen_range(-bound..=bound),
        rng.gen_range(-bound..=bound),
        rng.gen_range(-bound..=bound),
        e,
    )
}

/// Checks `δφ_ξ = ξξ`, `δφ_η = ηη`, `δθ = ξη` on random pairs and the
/// cocycle identity for `c₁`, `c₂` on random triples, with `|m|,|n|,|p| ≤ bound`.
pub fn verify_identities(
    e: i64,
    samples: usize,
    bound: i64,
    rng: &mut impl Rng,
) -> Result<Vec<IdentityCheck>> {
    let c = cochains(e)?;
    let pairs = [
        ("δφ_ξ = ξ∪ξ", coboundary1(&c.phi_xi), cup(&c.xi, &c.xi)),
        ("δφ_η = η∪η", coboundary1(&c.phi_eta), cup(&c.eta, &c.eta)),
        ("δθ = ξ∪η", coboundary1(&c.theta), cup(&c.xi, &c.eta)),
    ];
    let mut out = Vec::new();
    for (name, lhs, rhs) in pairs {
        let diff = lhs.sub(&rhs);
        let mut failures = 0;
        for _ in 0..samples {
            let (g, h) = (random_element(rng, bound, e), random_element(rng, bound, e));
            if !diff.eval(&g, &h)?.is_zero() {
                failures += 1;
            }
        }
        out.push(IdentityCheck {
            name: name.to_string(),
            samples,
            failures,
        });
    }
    let (c1, c2) = triple_product_cocycles(e)?;
    for (name, cocycle) in [("δc₁ = 0", c1), ("δc₂ = 0", c2)] {
        let mut failures = 0;
        for _ in 0..samples {
            let g = random_element(rng, bound, e);
            let h = random_element(rng, bound, e);
            let k = random_element(rng, bound, e);
            if !cocycle_defect(&cocycle, &g, &h, &k)?.is_zero() {
                failures += 1;
            }
        }
        out.push(IdentityCheck {
            name: name.to_string(),
            samples,
            failures,
        });
    }
    Ok(out)
}
