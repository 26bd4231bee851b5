//! Aggregated obstruction reports.
//!
//! A report is a pure function of the input and the search radius: the
//! serialized JSON is byte-identical across runs.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{self, AbelianCandidate};
use crate::chi::{self, ChiStatus, ChiVerdict, Reason};
use crate::forms::{AlternatingForm3, FormDescriptor};
use crate::seifert::{self, NonorientableConstraints, SeifertData, SmoothObstructions};
use crate::splitting::{self, SplitSearch, SplitWitness};
use crate::torsion::{self, FiniteAbelian, Homology, HyperbolicWitness, LinkingPairing};
use crate::zlinalg::{self, IntMatrix};
use crate::{Error, Result};

pub const TOOL_NAME: &str = "hsobstruct";
pub const DEFAULT_RADIUS: u32 = 3;

/// A manifold description, tagged by `"kind"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifoldInput {
    Seifert {
        genus: i64,
        pairs: Vec<(i64, i64)>,
    },
    /// The cup-product 3-form alone; `H₁` is taken to be `Z^β`.
    Form(FormDescriptor),
    /// Symmetric linking/framing matrix of a surgery presentation.
    LinkingMatrix {
        matrix: Vec<Vec<i64>>,
    },
    /// A torsion linking pairing, with rationals written as strings.
    #[serde(alias = "linking")]
    LinkingPairing {
        factors: Vec<u64>,
        gram: Vec<Vec<String>>,
        #[serde(default)]
        beta: usize,
    },
}

impl ManifoldInput {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn label(&self) -> String {
        match self {
            ManifoldInput::Seifert { genus, pairs } => {
                match SeifertData::new(*genus, pairs.clone()) {
                    Ok(s) => s.to_string(),
                    Err(_) => format!("Seifert genus {genus}"),
                }
            }
            ManifoldInput::Form(d) => format!(
                "3-form of rank {} with {} monomials",
                d.beta,
                d.monomials.len()
            ),
            ManifoldInput::LinkingMatrix { matrix } => {
                format!("surgery on a {}-component link", matrix.len())
            }
            ManifoldInput::LinkingPairing { factors, .. } => {
                format!("linking pairing on {} generators", factors.len())
            }
        }
    }
}

pub fn parse_pairing(factors: &[u64], gram: &[Vec<String>]) -> Result<LinkingPairing> {
    let gram = gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|q| crate::parse_rational(q))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    LinkingPairing::new(factors.to_vec(), gram)
}

fn matrix_from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| zlinalg::to_big(r)).collect();
    IntMatrix::from_rows(&big, cols)
}

/// `H₁` of surgery on a framed link: the cokernel of its linking matrix.
pub fn homology_from_linking_matrix(m: &IntMatrix) -> Result<Homology> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(torsion::homology_of_relations(m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub radius: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub betti: usize,
    /// Unknown for bare 3-form inputs.
    pub torsion: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HyperbolicStatus {
    Hyperbolic,
    NotHyperbolic,
    /// No pairing was available.
    NotComputed,
    /// The group exceeds the exhaustive search bound.
    TooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionSummary {
    pub group: String,
    pub order: String,
    pub direct_double: bool,
    /// `τ` with `T ≅ τ ⊕ τ`.
    pub half: Option<String>,
    pub hyperbolic: HyperbolicStatus,
    pub hyperbolic_witness: Option<HyperbolicWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchOutcome {
    Found,
    NotFound,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitRow {
    pub gamma: usize,
    pub chi_x: i64,
    pub search: SearchOutcome,
    pub witness: Option<SplitWitness>,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormSection {
    pub beta: usize,
    pub is_zero: bool,
    pub cup_kernel_rank: usize,
    pub splittings: Vec<SplitRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeifertSection {
    pub data: String,
    pub genus: i64,
    pub pairs: Vec<(i64, i64)>,
    pub euler_invariant: String,
    pub smooth: SmoothObstructions,
    pub nonorientable_bundle: Option<NonorientableConstraints>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Embeddability {
    /// Some implemented test proves there is no embedding.
    NotEmbeddable,
    /// No implemented test rules out an embedding.
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub tool: ToolInfo,
    pub manifold: String,
    pub beta: usize,
    pub homology: HomologySummary,
    pub torsion: Option<TorsionSummary>,
    pub cup_form: Option<FormSection>,
    pub seifert: Option<SeifertSection>,
    pub chi_table: Vec<ChiVerdict>,
    /// `χ(X)` compatible with a product splitting of the rational 2-step
    /// nilpotent quotient of `π₁(M)`.
    pub two_step_quotient_chi: Vec<i64>,
    /// Abelian `π₁(X)` compatible with `β`.
    pub abelian_pi1: Vec<AbelianCandidate>,
    /// Reasons that rule out every embedding.
    pub obstructions: Vec<Reason>,
    pub embeddability: Embeddability,
}

impl ObstructionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// 0 if no obstruction was found, 2 if the manifold provably does not embed.
    pub fn exit_code(&self) -> i32 {
        match self.embeddability {
            Embeddability::Open => 0,
            Embeddability::NotEmbeddable => 2,
        }
    }

    pub fn allowed_chi(&self) -> Vec<i64> {
        self.chi_table
            .iter()
            .filter(|v| v.status == ChiStatus::Allowed)
            .map(|v| v.chi_x)
            .collect()
    }

    pub fn excluded_chi(&self) -> Vec<i64> {
        self.chi_table
            .iter()
            .filter(|v| v.status == ChiStatus::Excluded)
            .map(|v| v.chi_x)
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}  (β = {})", self.manifold, self.beta);
        if let Some(t) = &self.homology.torsion {
            let free = match self.homology.betti {
                0 => None,
                1 => Some("Z".to_string()),
                b => Some(format!("Z^{b}")),
            };
            let h1 = match (free, t.as_str()) {
                (None, t) => t.to_string(),
                (Some(f), "0") => f,
                (Some(f), t) => format!("{f} ⊕ {t}"),
            };
            let _ = writeln!(out, "H₁ = {h1}");
        }
        if let Some(t) = &self.torsion {
            let _ = writeln!(
                out,
                "torsion {}: direct double {}, linking pairing {:?}",
                t.group, t.direct_double, t.hyperbolic
            );
        }
        if let Some(s) = &self.seifert {
            let _ = writeln!(out, "ε_S = {}", s.euler_invariant);
        }
        for v in &self.chi_table {
            let status = match v.status {
                ChiStatus::Allowed => "allowed",
                ChiStatus::Excluded => "excluded",
                ChiStatus::Inconclusive => "inconclusive",
            };
            let tags: Vec<String> = v.reasons.iter().skip(1).map(ToString::to_string).collect();
            let _ = writeln!(
                out,
                "χ(X) = {:>3}  χ(Y) = {:>3}  {status:<12} {}",
                v.chi_x,
                v.chi_y,
                tags.join("; ")
            );
        }
        for r in &self.obstructions {
            let _ = writeln!(out, "does not embed: {r}");
        }
        let _ = writeln!(
            out,
            "verdict: {}",
            match self.embeddability {
                Embeddability::NotEmbeddable => "does not embed",
                Embeddability::Open => "no obstruction found",
            }
        );
        out
    }
}

fn torsion_summary(group: &FiniteAbelian, pairing: Option<&LinkingPairing>) -> TorsionSummary {
    let (hyperbolic, hyperbolic_witness) = match pairing {
        None => (HyperbolicStatus::NotComputed, None),
        Some(p) => match torsion::is_hyperbolic(p) {
            Ok(Some(w)) => (HyperbolicStatus::Hyperbolic, Some(w)),
            Ok(None) => (HyperbolicStatus::NotHyperbolic, None),
            Err(_) => (HyperbolicStatus::TooLarge, None),
        },
    };
    TorsionSummary {
        group: group.to_string(),
        order: group.order().to_string(),
        direct_double: group.is_direct_double(),
        half: group.half().map(|h| h.to_string()),
        hyperbolic,
        hyperbolic_witness,
    }
}

fn torsion_obstructions(t: &TorsionSummary) -> Vec<Reason> {
    let mut out = Vec::new();
    if !t.direct_double {
        out.push(Reason::new(
            "torsion-direct-double",
            format!("torsion {} is not of the form τ ⊕ τ", t.group),
        ));
    }
    if t.hyperbolic == HyperbolicStatus::NotHyperbolic {
        out.push(Reason::new(
            "linking-hyperbolic",
            "the torsion linking pairing is not hyperbolic",
        ));
    }
    out
}

/// One row of the splitting table: bounded search plus the exact certificates
/// available when `γ = β` or `γ = β − 1`.
pub fn split_row(f: &AlternatingForm3, gamma: usize, radius: u32) -> Result<SplitRow> {
    let beta = f.beta();
    let chi_x = 1 + beta as i64 - 2 * gamma as i64;
    let outcome =
        splitting::find_splitting_with_budget(f, gamma, radius, splitting::DEFAULT_BUDGET)?;
    let (search, mut witness) = match outcome {
        SplitSearch::Found(w) => (SearchOutcome::Found, Some(w)),
        SplitSearch::NotFound => (SearchOutcome::NotFound, None),
        SplitSearch::BudgetExhausted => (SearchOutcome::BudgetExhausted, None),
    };
    let mut certificate = None;
    if witness.is_none() && gamma == beta {
        certificate = Some(Certificate {
            kind: "nonzero-form".into(),
            detail: "the 3-form is nonzero, so it cannot vanish on all of H¹(M)".into(),
        });
    } else if witness.is_none() && gamma + 1 == beta {
        match splitting::exact_split_epi(f) {
            Some(lam) => {
                let kernel = lam.kernel_basis();
                let w = SplitWitness {
                    valid: false,
                    a_basis: kernel,
                    b_basis: vec![lam.section()],
                };
                let valid = w.revalidate(f);
                witness = Some(SplitWitness { valid, ..w });
            }
            None => {
                let mut detail = String::from(
                    "no nonzero integer λ satisfies λ ∧ μ = 0, so μ is nonzero on ∧³Ker(λ) for every epimorphism λ",
                );
                if *f == AlternatingForm3::counterexample6() {
                    detail.push_str("; an explicit rank-3 summand of each Ker(λ) with nonzero μ is given by the case analysis on λ");
                }
                certificate = Some(Certificate {
                    kind: "wedge-kernel".into(),
                    detail,
                });
            }
        }
    }
    Ok(SplitRow {
        gamma,
        chi_x,
        search,
        witness,
        certificate,
    })
}

fn apply_split_rows(table: &mut [ChiVerdict], rows: &[SplitRow], radius: u32) {
    for (v, row) in table.iter_mut().zip(rows) {
        if let Some(w) = &row.witness {
            let how = if row.search == SearchOutcome::Found {
                format!("within radius {radius}")
            } else {
                "by the exact corank-one solver".into()
            };
            v.annotate(Reason::new(
                "cup-form-splitting",
                format!(
                    "splitting with rank {} and {} summands found {how}",
                    w.a_basis.len(),
                    w.b_basis.len()
                ),
            ));
        } else if let Some(c) = &row.certificate {
            v.exclude(Reason::new(
                "cup-form-splitting",
                format!("{}: {}", c.kind, c.detail),
            ));
        } else {
            let why = match row.search {
                SearchOutcome::BudgetExhausted => "search budget exhausted",
                _ => "no splitting within the search radius",
            };
            v.mark_inconclusive(Reason::new(
                "cup-form-splitting",
                format!("{why} ({radius})"),
            ));
        }
    }
}

fn common_sections(beta: usize) -> (Vec<i64>, Vec<AbelianCandidate>) {
    let two_step = chi::lemma1_set(beta)
        .into_iter()
        .filter(|v| chi::theorem6_compatible(beta, v.gamma).expect("γ ≥ β/2 in the table"))
        .map(|v| v.chi_x)
        .collect();
    (two_step, abelian::abelian_feasibility(beta))
}

/// Runs every applicable test on `input`. Splitting searches use `radius`.
pub fn full_report(input: &ManifoldInput, radius: u32) -> Result<ObstructionReport> {
    if radius == 0 {
        return Err(Error::BadParameter("radius must be at least 1".into()));
    }
    let mut obstructions = Vec::new();
    let mut torsion_section = None;
    let mut cup_form = None;
    let mut seifert_section = None;
    let (beta, homology, chi_table) = match input {
        ManifoldInput::Seifert { genus, pairs } => {
            let s = SeifertData::new(*genus, pairs.clone())?;
            let h = seifert::homology(&s);
            let table = seifert::obstruct(&s);
            let smooth = seifert::smooth_obstructions(&s);
            if !smooth.even_cone_same_valuation {
                obstructions.push(Reason::new(
                    "even-cone-valuation",
                    "even cone orders with different 2-adic valuations force a non-hyperbolic linking pairing",
                ));
            }
            let nonorientable_bundle = match (s.is_orientable_base(), s.bundle_euler()) {
                (false, Some(e)) => Some(seifert::nonorientable_constraints(s.crosscaps(), e)?),
                _ => None,
            };
            if nonorientable_bundle
                .as_ref()
                .is_some_and(|nc| !nc.embeddable_normal_data)
            {
                obstructions.push(Reason::new(
                    "nonorientable-bundle",
                    "the Euler number is not the normal Euler number of any embedded nonorientable surface",
                ));
            }
            if !h.torsion.is_trivial() {
                let t = torsion_summary(&h.torsion, None);
                obstructions.extend(torsion_obstructions(&t));
                torsion_section = Some(t);
            }
            seifert_section = Some(SeifertSection {
                data: s.to_string(),
                genus: s.genus,
                pairs: s.pairs.clone(),
                euler_invariant: seifert::euler_invariant(&s).to_string(),
                smooth,
                nonorientable_bundle,
            });
            (
                h.betti,
                HomologySummary {
                    betti: h.betti,
                    torsion: Some(h.torsion.to_string()),
                },
                table,
            )
        }
        ManifoldInput::Form(d) => {
            let f = AlternatingForm3::try_from(d)?;
            let beta = f.beta();
            let mut table = chi::lemma1_set(beta);
            let rows = table
                .par_iter()
                .map(|v| split_row(&f, v.gamma, radius))
                .collect::<Result<Vec<_>>>()?;
            apply_split_rows(&mut table, &rows, radius);
            cup_form = Some(FormSection {
                beta,
                is_zero: f.is_zero(),
                cup_kernel_rank: f.cup_kernel_rank(),
                splittings: rows,
            });
            (
                beta,
                HomologySummary {
                    betti: beta,
                    torsion: None,
                },
                table,
            )
        }
        ManifoldInput::LinkingMatrix { matrix } => {
            let m = matrix_from_rows(matrix)?;
            let h = homology_from_linking_matrix(&m)?;
            if !h.torsion.is_trivial() {
                let pairing = torsion::linking_from_matrix(&m)?;
                let t = torsion_summary(&h.torsion, pairing.as_ref());
                obstructions.extend(torsion_obstructions(&t));
                torsion_section = Some(t);
            }
            (
                h.betti,
                HomologySummary {
                    betti: h.betti,
                    torsion: Some(h.torsion.to_string()),
                },
                chi::lemma1_set(h.betti),
            )
        }
        ManifoldInput::LinkingPairing {
            factors,
            gram,
            beta,
        } => {
            let p = parse_pairing(factors, gram)?;
            let group = p.group();
            let t = torsion_summary(&group, Some(&p));
            obstructions.extend(torsion_obstructions(&t));
            torsion_section = Some(t);
            (
                *beta,
                HomologySummary {
                    betti: *beta,
                    torsion: Some(group.to_string()),
                },
                chi::lemma1_set(*beta),
            )
        }
    };
    if chi_table.iter().all(|v| v.status == ChiStatus::Excluded) && obstructions.is_empty() {
        obstructions.push(Reason::new(
            "euler-parity-range",
            "every admissible χ(X) is excluded",
        ));
    }
    let (two_step_quotient_chi, abelian_pi1) = common_sections(beta);
    let embeddability = if obstructions.is_empty() {
        Embeddability::Open
    } else {
        Embeddability::NotEmbeddable
    };
    Ok(ObstructionReport {
        tool: ToolInfo {
            name: TOOL_NAME.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            radius,
        },
        manifold: input.label(),
        beta,
        homology,
        torsion: torsion_section,
        cup_form,
        seifert: seifert_section,
        chi_table,
        two_step_quotient_chi,
        abelian_pi1,
        obstructions,
        embeddability,
    })
}
