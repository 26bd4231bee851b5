//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed. Exits nonzero
//! if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hsobstruct::abelian;
use hsobstruct::chi::{self, ChiStatus};
use hsobstruct::csknot;
use hsobstruct::forms::AlternatingForm3;
use hsobstruct::massey;
use hsobstruct::report::{self, ManifoldInput};
use hsobstruct::seifert;
use hsobstruct::splitting::{self, Epimorphism, LexPrimitives};
use hsobstruct::torsion::{self, LinkingPairing};
use hsobstruct::zlinalg::{self, IntMatrix};

const AC1_LIMIT: Duration = Duration::from_secs(1);
const AC2_LIMIT: Duration = Duration::from_secs(60);
const AC2_RADIUS: i64 = 4;
const AC4_RADIUS: u32 = 3;
const AC4_FORMS: usize = 100;
const AC4_REQUIRED: usize = 95;
const AC4_DEFAULT_SEED: u64 = 20_240_601;
const AC5_SAMPLES: usize = 10_000;
const AC5_BOUND: i64 = 100;
const AC5_SEED: u64 = 5;
const AC5_LIMIT: Duration = Duration::from_secs(10);
const AC8_LIMIT: Duration = Duration::from_secs(5);
const AC9_MAX_ORDER: u64 = 144;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn seed() -> u64 {
    std::env::var("HSOBSTRUCT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(AC4_DEFAULT_SEED)
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let chis = |beta: usize| {
        chi::lemma1_set(beta)
            .iter()
            .map(|v| v.chi_x)
            .collect::<Vec<_>>()
    };
    let mut ok = chis(0) == vec![1] && chis(1) == vec![0];
    for beta in 0..=10usize {
        let b = beta as i64;
        let expected: Vec<i64> = (1 - b..=1)
            .filter(|x| (x - 1 - b).rem_euclid(2) == 0)
            .collect();
        let table = chi::lemma1_set(beta);
        ok &= chis(beta) == expected;
        ok &= table
            .iter()
            .all(|v| v.chi_x + v.chi_y == 2 && v.chi_x == 1 + b - 2 * v.gamma as i64);
    }
    let elapsed = start.elapsed();
    outcome(
        ok && elapsed < AC1_LIMIT,
        format!("β ≤ 10 tables checked in {elapsed:?}"),
    )
}

/// First nonzero coordinate in the order 6, 3, 4, 1, 2, 5, and the power of
/// it that the witness value must equal.
fn closed_form(lam: &[i64]) -> BigInt {
    for (idx, pow) in [(6, 3), (3, 3), (4, 3), (1, 2), (2, 2), (5, 2)] {
        let l = lam[idx - 1];
        if l != 0 {
            return BigInt::from(l).pow(pow);
        }
    }
    unreachable!("λ is nonzero")
}

fn ac2() -> Outcome {
    let start = Instant::now();
    let f = AlternatingForm3::counterexample6();
    let lambdas: Vec<Vec<i64>> = LexPrimitives::new(6, AC2_RADIUS as u32)
        .map(|v| v.iter().map(|x| x.to_i64().expect("small")).collect())
        .collect();
    let failures: Vec<Vec<i64>> = lambdas
        .par_iter()
        .filter(|lam| {
            let epi = Epimorphism::from_i64(lam).expect("primitive");
            let Ok(w) = splitting::beta6_witness(&f, &epi) else {
                return true;
            };
            let in_kernel = |v: &Vec<BigInt>| epi.apply(v).is_zero();
            let mut stacked = w.summand.clone();
            stacked.extend(w.generators.iter().cloned());
            let generators_inside = IntMatrix::from_rows(&stacked, 6)
                .map(|m| zlinalg::rank(&m) == 3)
                .unwrap_or(false);
            let summand_value = f
                .evaluate(&w.summand[0], &w.summand[1], &w.summand[2])
                .unwrap_or_default();
            let generator_value = f
                .evaluate(&w.generators[0], &w.generators[1], &w.generators[2])
                .unwrap_or_default();
            let good = w.summand.len() == 3
                && zlinalg::is_saturated(&w.summand, 6).unwrap_or(false)
                && w.summand.iter().all(in_kernel)
                && w.generators.iter().all(in_kernel)
                && generators_inside
                && !summand_value.is_zero()
                && generator_value == w.value
                && w.value == w.closed_form
                && w.closed_form == closed_form(lam)
                && !w.value.is_zero();
            !good
        })
        .cloned()
        .collect();
    let elapsed = start.elapsed();
    let detail = format!(
        "{} primitive λ up to sign in [−{AC2_RADIUS},{AC2_RADIUS}]⁶, {} failures, {elapsed:?}",
        lambdas.len(),
        failures.len()
    );
    outcome(
        failures.is_empty() && elapsed < AC2_LIMIT && lambdas.len() > 10_000,
        detail,
    )
}

fn ac3() -> Outcome {
    let f = AlternatingForm3::counterexample6();
    let r = report::full_report(&ManifoldInput::Form(f.to_descriptor()), 3).expect("report");
    let excluded: BTreeSet<i64> = r.excluded_chi().into_iter().collect();
    let open: BTreeSet<i64> = r
        .chi_table
        .iter()
        .filter(|v| v.status != ChiStatus::Excluded)
        .map(|v| v.chi_x)
        .collect();
    let reasons_ok = r
        .chi_table
        .iter()
        .filter(|v| v.status == ChiStatus::Excluded)
        .all(|v| v.reasons.len() >= 2);
    let witness = |gamma| {
        splitting::find_splitting(&f, gamma, 3)
            .ok()
            .flatten()
            .is_some_and(|w| w.valid && w.revalidate(&f) && w.a_basis.len() == gamma)
    };
    let (w3, w4) = (witness(3), witness(4));
    let ok = excluded == BTreeSet::from([-5, -3])
        && open == BTreeSet::from([-1, 1])
        && reasons_ok
        && w3
        && w4;
    outcome(
        ok,
        format!("excluded {excluded:?}, not excluded {open:?}, γ=3 witness {w3}, γ=4 witness {w4}"),
    )
}

fn random_form(beta: usize, rng: &mut ChaCha8Rng) -> AlternatingForm3 {
    let mut monomials = Vec::new();
    for i in 0..beta {
        for j in i + 1..beta {
            for k in j + 1..beta {
                monomials.push(([i, j, k], BigInt::from(rng.gen_range(-2i64..=2))));
            }
        }
    }
    AlternatingForm3::from_monomials(beta, monomials).expect("indices in range")
}

fn ac4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let mut ok = true;
    let mut parts = Vec::new();
    for beta in 3..=5usize {
        let forms: Vec<AlternatingForm3> = (0..AC4_FORMS)
            .map(|_| random_form(beta, &mut rng))
            .collect();
        let results: Vec<(bool, bool)> = forms
            .par_iter()
            .map(|f| {
                let verified = |lam: &Epimorphism| {
                    splitting::vanishes_on_kernel(f, lam).unwrap_or(false)
                        && f.restrict(&lam.kernel_basis()).is_ok_and(|r| r.is_zero())
                };
                let searched =
                    splitting::search_split_epi(f, AC4_RADIUS).is_some_and(|l| verified(&l));
                let exact = splitting::exact_split_epi(f).is_some_and(|l| verified(&l));
                (searched, exact)
            })
            .collect();
        let found = results.iter().filter(|r| r.0).count();
        let exact = results.iter().filter(|r| r.1).count();
        ok &= found >= AC4_REQUIRED;
        parts.push(format!(
            "β={beta}: {found}/{AC4_FORMS} within radius {AC4_RADIUS} ({} inconclusive), exact solver {exact}/{AC4_FORMS}",
            AC4_FORMS - found
        ));
    }
    outcome(ok, parts.join("; "))
}

fn ac5() -> Outcome {
    let start = Instant::now();
    let results: Vec<(i64, bool, bool)> = [1i64, 2, 3, 5]
        .par_iter()
        .map(|&e| {
            let mut rng = ChaCha8Rng::seed_from_u64(AC5_SEED + e as u64);
            let checks =
                massey::verify_identities(e, AC5_SAMPLES, AC5_BOUND, &mut rng).expect("valid e");
            let identities = checks.len() == 5
                && checks
                    .iter()
                    .all(|c| c.passed() && c.samples == AC5_SAMPLES);
            (
                e,
                identities,
                massey::restriction_independence(e).expect("valid e"),
            )
        })
        .collect();
    let elapsed = start.elapsed();
    let ok = results.iter().all(|r| r.1 && r.2);
    let detail = results
        .iter()
        .map(|(e, i, r)| format!("e={e}: identities {i}, independent {r}"))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(ok && elapsed < AC5_LIMIT, format!("{detail}; {elapsed:?}"))
}

fn ac6() -> Outcome {
    let run = |genus: i64, pairs: &[(i64, i64)]| {
        report::full_report(
            &ManifoldInput::Seifert {
                genus,
                pairs: pairs.to_vec(),
            },
            3,
        )
        .expect("report")
    };
    let heis = run(1, &[(1, 1)]);
    let torus = run(1, &[(1, 0)]);
    let prism = run(0, &[(2, 1), (2, -1)]);
    let s = prism.seifert.as_ref().expect("seifert section");
    let ok = heis.allowed_chi() == vec![1]
        && torus.allowed_chi() == vec![0]
        && prism.beta == 1
        && prism.allowed_chi() == vec![0]
        && s.euler_invariant == "0"
        && s.smooth.skew_symmetric;
    outcome(
        ok,
        format!(
            "M(1;(1,1)) allows {:?}; M(1;(1,0)) allows {:?}; M(0;(2,1),(2,−1)) β={} allows {:?}, ε={}, skew {}",
            heis.allowed_chi(),
            torus.allowed_chi(),
            prism.beta,
            prism.allowed_chi(),
            s.euler_invariant,
            s.smooth.skew_symmetric
        ),
    )
}

fn ac7() -> Outcome {
    let a = seifert::nonorientable_constraints(1, 2).expect("c ≥ 1");
    let b = seifert::nonorientable_constraints(2, 1).expect("c ≥ 1");
    let c = seifert::nonorientable_constraints(3, 6).expect("c ≥ 1");
    let r = report::full_report(
        &ManifoldInput::Seifert {
            genus: -3,
            pairs: vec![(1, 6)],
        },
        3,
    )
    .expect("report");
    let row_one = r.chi_table.iter().find(|v| v.chi_x == 1).map(|v| v.status);
    let ok = a.embeddable_normal_data
        && !b.embeddable_normal_data
        && c.embeddable_normal_data
        && c.realized_chi == vec![-1]
        && c.open_chi == vec![1]
        && row_one == Some(ChiStatus::Inconclusive);
    outcome(
        ok,
        format!(
            "(1,2) {}, (2,1) {}, (3,6) realized {:?} open {:?}, report χ=1 {:?}",
            a.embeddable_normal_data, b.embeddable_normal_data, c.realized_chi, c.open_chi, row_one
        ),
    )
}

/// `|det(Aᶜ − I)|` by repeated 3×3 multiplication and cofactor expansion.
fn det_oracle(a: i64, c: u32) -> BigInt {
    let a = BigInt::from(a);
    let base = [
        [BigInt::zero(), BigInt::zero(), BigInt::one()],
        [BigInt::one(), BigInt::zero(), BigInt::one() - &a],
        [BigInt::zero(), BigInt::one(), a],
    ];
    let mul = |x: &[[BigInt; 3]; 3], y: &[[BigInt; 3]; 3]| {
        let mut out: [[BigInt; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| &x[i][k] * &y[k][j]).sum();
            }
        }
        out
    };
    let mut p = base.clone();
    for _ in 1..c {
        p = mul(&p, &base);
    }
    for (i, row) in p.iter_mut().enumerate() {
        row[i] -= 1;
    }
    let d = &p[0][0] * (&p[1][1] * &p[2][2] - &p[1][2] * &p[2][1])
        - &p[0][1] * (&p[1][0] * &p[2][2] - &p[1][2] * &p[2][0])
        + &p[0][2] * (&p[1][0] * &p[2][1] - &p[1][1] * &p[2][0]);
    d.abs()
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let roots_ok = (6..=60).all(|a| csknot::verify_root_intervals(a).unwrap_or(false));
    let mut failing = Vec::new();
    let mut oracle_ok = true;
    let mut cases = 0;
    for c in 1..=5u32 {
        for a in 6..=60i64 {
            if a <= 3 * c as i64 {
                continue;
            }
            cases += 1;
            let order = csknot::quotient_order(a, c).expect("a > 5");
            oracle_ok &= order == BigInt::from(c) * det_oracle(a, c);
            if order <= csknot::order_bound(a, c) {
                failing.push((a, c));
            }
        }
    }
    let cross = (6..=60i64).all(|a| {
        csknot::resultant_order(a, 2).ok() == Some(BigInt::from(2 * a + 1))
            && csknot::resultant_order(a, 1).ok() == Some(BigInt::one())
    });
    let elapsed = start.elapsed();
    let failing_c: BTreeSet<u32> = failing.iter().map(|p| p.1).collect();
    outcome(
        roots_ok && failing.is_empty() && oracle_ok && cross && elapsed < AC8_LIMIT,
        format!(
            "roots {roots_ok}; strict bound fails on {}/{cases} pairs (c ∈ {failing_c:?}); determinant oracle {oracle_ok}; |det(A²−I)| = 2a+1 and |det(A−I)| = 1: {cross}; {elapsed:?}",
            failing.len()
        ),
    )
}

/// Elements of `⊕ Z/nᵢ` as coordinate vectors, the pairing as numerators
/// over a common denominator, and every subgroup found by spanning all
/// tuples of at most `orders.len()` elements.
struct Oracle {
    elems: Vec<Vec<i64>>,
    table: Vec<Vec<i64>>,
}

impl Oracle {
    fn new(p: &LinkingPairing) -> Self {
        let orders = p.orders();
        let mut elems = vec![vec![]];
        for &n in orders {
            elems = elems
                .into_iter()
                .flat_map(|e| {
                    (0..n as i64).map(move |x| {
                        let mut v = e.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        let denom: i64 = orders.iter().map(|&n| n as i64).product();
        let table = elems
            .iter()
            .map(|x| {
                elems
                    .iter()
                    .map(|y| {
                        let q: BigRational = p.evaluate(x, y) * BigInt::from(denom);
                        q.to_integer().to_i64().expect("small").rem_euclid(denom)
                    })
                    .collect()
            })
            .collect();
        Oracle { elems, table }
    }

    fn index(&self, v: &[i64]) -> usize {
        self.elems.iter().position(|e| e == v).expect("element")
    }

    fn add(&self, orders: &[u64], a: usize, b: usize) -> usize {
        let v: Vec<i64> = self.elems[a]
            .iter()
            .zip(&self.elems[b])
            .zip(orders)
            .map(|((x, y), &n)| (x + y).rem_euclid(n as i64))
            .collect();
        self.index(&v)
    }

    fn subgroups(&self, orders: &[u64]) -> Vec<BTreeSet<usize>> {
        let n = self.elems.len();
        let sum: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| self.add(orders, a, b)).collect())
            .collect();
        let span = |gens: &[usize]| {
            let mut set = BTreeSet::from([0usize]);
            let mut frontier = vec![0usize];
            while let Some(x) = frontier.pop() {
                for &g in gens {
                    let y = sum[x][g];
                    if set.insert(y) {
                        frontier.push(y);
                    }
                }
            }
            set
        };
        let mut found: HashSet<BTreeSet<usize>> = HashSet::new();
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..orders.len() {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |g| {
                        let mut t = t.clone();
                        t.push(g);
                        t
                    })
                })
                .collect();
            for t in &tuples {
                found.insert(span(t));
            }
        }
        found.insert(BTreeSet::from([0]));
        found.into_iter().collect()
    }

    fn hyperbolic(&self, orders: &[u64]) -> bool {
        let total = self.elems.len();
        let subs = self.subgroups(orders);
        let lagrangians: Vec<&BTreeSet<usize>> = subs
            .iter()
            .filter(|s| s.len() * s.len() == total)
            .filter(|s| s.iter().all(|&x| s.iter().all(|&y| self.table[x][y] == 0)))
            .collect();
        lagrangians.iter().any(|n| {
            lagrangians.iter().any(|p| {
                n.intersection(p).count() == 1
                    && p.iter()
                        .all(|&x| x == 0 || n.iter().any(|&y| self.table[x][y] != 0))
            })
        })
    }
}

fn rational(num: i64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Structured pairings plus seeded random symmetric pairings over a fixed
/// list of groups of order at most 144.
fn pairing_corpus() -> Vec<LinkingPairing> {
    let groups: Vec<Vec<u64>> = vec![
        vec![2],
        vec![3],
        vec![4],
        vec![9],
        vec![12],
        vec![2, 2],
        vec![2, 4],
        vec![3, 3],
        vec![2, 8],
        vec![4, 4],
        vec![3, 9],
        vec![5, 5],
        vec![6, 6],
        vec![4, 16],
        vec![7, 7],
        vec![8, 8],
        vec![9, 9],
        vec![10, 10],
        vec![12, 12],
        vec![2, 2, 2],
        vec![2, 2, 4],
        vec![2, 2, 2, 2],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(144);
    let mut out = Vec::new();
    for orders in &groups {
        let k = orders.len();
        for _ in 0..6 {
            let mut gram = vec![vec![BigRational::zero(); k]; k];
            for i in 0..k {
                for j in i..k {
                    let g = num_integer::gcd(orders[i], orders[j]);
                    let q = rational(rng.gen_range(0..g as i64), g);
                    gram[i][j] = q.clone();
                    gram[j][i] = q;
                }
            }
            out.push(LinkingPairing::new(orders.clone(), gram).expect("valid pairing"));
        }
    }
    for n in 2..=12u64 {
        out.push(LinkingPairing::standard_hyperbolic(n).expect("n ≥ 2"));
        out.push(
            LinkingPairing::new(
                vec![n, n],
                vec![
                    vec![rational(1, n), rational(0, 1)],
                    vec![rational(0, 1), rational(-1, n)],
                ],
            )
            .expect("valid pairing"),
        );
    }
    out.push(
        LinkingPairing::new(
            vec![2, 2],
            vec![
                vec![rational(0, 1), rational(1, 2)],
                vec![rational(1, 2), rational(1, 2)],
            ],
        )
        .expect("valid pairing"),
    );
    out.push(LinkingPairing::cyclic(9, 1).expect("valid pairing"));
    out.push(LinkingPairing::cyclic(4, 1).expect("valid pairing"));
    out
}

fn ac9() -> Outcome {
    let corpus = pairing_corpus();
    let results: Vec<(bool, bool, bool)> = corpus
        .par_iter()
        .filter(|p| p.order().is_some_and(|n| n <= AC9_MAX_ORDER))
        .map(|p| {
            let oracle = Oracle::new(p).hyperbolic(p.orders());
            let found = torsion::is_hyperbolic(p).expect("small group");
            let witness_ok = found
                .as_ref()
                .is_none_or(|w| torsion::verify_hyperbolic_witness(p, w));
            let agree = found.is_some() == oracle && witness_ok;
            let implies_double = found.is_none() || p.group().is_direct_double();
            (agree, implies_double, found.is_some())
        })
        .collect();
    let standard_ok = (2..=12u64).all(|n| {
        LinkingPairing::standard_hyperbolic(n)
            .ok()
            .and_then(|p| torsion::is_hyperbolic(&p).ok().flatten())
            .is_some()
    });
    let disagreements = results.iter().filter(|r| !r.0).count();
    let non_double = results.iter().filter(|r| !r.1).count();
    let hyperbolic = results.iter().filter(|r| r.2).count();
    let ok = disagreements == 0 && non_double == 0 && standard_ok && !results.is_empty();
    outcome(
        ok,
        format!(
            "{} pairings ({hyperbolic} hyperbolic): {disagreements} disagreements with the oracle, {non_double} hyperbolic but not a direct double; standard Z/n ⊕ Z/n for n ≤ 12: {standard_ok}",
            results.len()
        ),
    )
}

fn ac10() -> Outcome {
    let mut ok = true;
    let mut nonempty = Vec::new();
    for beta in 0..=40usize {
        let cands = abelian::abelian_feasibility(beta);
        if !cands.is_empty() {
            nonempty.push(beta);
        }
        if [1, 3, 4, 6].contains(&beta) {
            ok &= !cands.is_empty() && cands.iter().all(|c| c.free_rank == (beta + 1) / 2);
        }
    }
    ok &= nonempty == vec![0, 1, 2, 3, 4, 6];
    outcome(ok, format!("nonempty for β ∈ {nonempty:?} (β ≤ 40)"))
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn ac11() -> Outcome {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool");
    let mut mismatched = Vec::new();
    for path in &paths {
        let text = std::fs::read_to_string(path).expect("readable");
        let input = ManifoldInput::from_json(&text).expect("valid input");
        let first = report::full_report(&input, 3).expect("report").to_json();
        let second = single.install(|| report::full_report(&input, 3).expect("report").to_json());
        if first != second {
            mismatched.push(path.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    outcome(
        mismatched.is_empty() && !paths.is_empty(),
        format!("{} inputs, mismatches {mismatched:?}", paths.len()),
    )
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 11] = [
        ("AC1", "χ(X) tables for β ≤ 10", ac1),
        ("AC2", "β=6 counterexample witnesses for every λ", ac2),
        ("AC3", "β=6 χ table and γ=3,4 splittings", ac3),
        ("AC4", "β ≤ 5 random forms split within radius 3", ac4),
        ("AC5", "Nil cochain identities and Massey independence", ac5),
        ("AC6", "Seifert χ tables", ac6),
        ("AC7", "nonorientable bundle constraints", ac7),
        ("AC8", "Cappell–Shaneson roots and quotient orders", ac8),
        ("AC9", "hyperbolicity against the exhaustive oracle", ac9),
        ("AC10", "abelian π₁ feasibility", ac10),
        ("AC11", "byte-identical reports", ac11),
    ];
    let mut failed = Vec::new();
    for (id, title, run) in criteria {
        let o = run();
        println!(
            "{} {id} {title}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing {failed:?}");
        std::process::exit(1);
    }
}
