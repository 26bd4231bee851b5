use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use hsobstruct::chi;
use hsobstruct::forms::{AlternatingForm3, FormDescriptor};
use hsobstruct::report::{self, ManifoldInput, SearchOutcome, DEFAULT_RADIUS};
use hsobstruct::{csknot, massey, torsion};

#[derive(Parser)]
#[command(
    name = "hsobstruct",
    version,
    about = "Obstructions to embedding 3-manifolds in S⁴"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable test on a manifold description.
    Report {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: u32,
        /// Also write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// List the admissible χ(X) for a given β.
    ChiSet {
        #[arg(long)]
        beta: usize,
    },
    /// Look for a splitting of a 3-form with a summand of rank γ.
    SplitSearch {
        form: PathBuf,
        #[arg(long)]
        gamma: usize,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: u32,
    },
    /// Report for a Seifert fibred manifold.
    Seifert {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: u32,
    },
    /// Check the Nil-group cochain identities on random samples.
    MasseyVerify {
        #[arg(long)]
        e: i64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Defaults to $HSOBSTRUCT_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        bound: i64,
    },
    /// Quotient orders of a Cappell–Shaneson 2-knot group.
    CsKnot {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        c: u32,
    },
    /// Direct-double and hyperbolicity tests for a torsion linking pairing.
    Linking { file: PathBuf },
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Parses `v` as a manifold description, filling in `"kind"` from the
/// payload shape when it is missing.
fn manifold_input(mut v: Value) -> anyhow::Result<ManifoldInput> {
    if let Value::Object(map) = &mut v {
        if !map.contains_key("kind") {
            let kind = if map.contains_key("pairs") {
                "seifert"
            } else if map.contains_key("monomials") {
                "form"
            } else if map.contains_key("matrix") {
                "linking_matrix"
            } else if map.contains_key("factors") {
                "linking_pairing"
            } else {
                bail!("cannot tell what kind of input this is; add a \"kind\" field");
            };
            map.insert("kind".into(), Value::String(kind.into()));
        }
    }
    Ok(ManifoldInput::from_json(&v.to_string())?)
}

fn run_report(input: &ManifoldInput, radius: u32, json: Option<&Path>) -> anyhow::Result<u8> {
    let r = report::full_report(input, radius)?;
    print!("{}", r.to_text());
    if let Some(path) = json {
        fs::write(path, r.to_json() + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(r.exit_code() as u8)
}

fn chi_set(beta: usize) {
    for v in chi::lemma1_set(beta) {
        let two_step = if chi::theorem6_compatible(beta, v.gamma).unwrap_or(false) {
            ""
        } else {
            "  (no 2-step splitting)"
        };
        println!(
            "χ(X) = {:>3}  χ(Y) = {:>3}  γ = {}{two_step}",
            v.chi_x, v.chi_y, v.gamma
        );
    }
}

fn split_search(path: &Path, gamma: usize, radius: u32) -> anyhow::Result<u8> {
    let desc: FormDescriptor = serde_json::from_value(read_json(path)?)?;
    let f = AlternatingForm3::try_from(&desc)?;
    let row = report::split_row(&f, gamma, radius)?;
    println!("β = {}, γ = {gamma}, χ(X) = {}", f.beta(), row.chi_x);
    match (&row.witness, &row.certificate) {
        (Some(w), _) => {
            let how = if row.search == SearchOutcome::Found {
                "search"
            } else {
                "exact solver"
            };
            println!("splitting found by {how}, revalidated: {}", w.valid);
            for v in &w.a_basis {
                println!("  A: {}", fmt_vec(v));
            }
            for v in &w.b_basis {
                println!("  B: {}", fmt_vec(v));
            }
        }
        (None, Some(c)) => println!("no splitting exists [{}]: {}", c.kind, c.detail),
        (None, None) => match row.search {
            SearchOutcome::BudgetExhausted => println!("inconclusive: search budget exhausted"),
            _ => println!("inconclusive: no splitting within radius {radius}"),
        },
    }
    Ok(0)
}

fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn massey_verify(e: i64, samples: usize, seed: Option<u64>, bound: i64) -> anyhow::Result<u8> {
    let seed = match seed {
        Some(s) => s,
        None => match std::env::var("HSOBSTRUCT_SEED") {
            Ok(s) => s
                .parse()
                .context("HSOBSTRUCT_SEED must be an unsigned integer")?,
            Err(_) => 0,
        },
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    for check in massey::verify_identities(e, samples, bound, &mut rng)? {
        ok &= check.passed();
        let status = if check.passed() { "pass" } else { "FAIL" };
        println!(
            "{status}  {}  ({} samples, {} failures)",
            check.name, check.samples, check.failures
        );
    }
    let independent = massey::restriction_independence(e)?;
    ok &= independent;
    println!(
        "{}  ⟨ξ,ξ,η⟩ and ⟨ξ,η,η⟩ independent",
        if independent { "pass" } else { "FAIL" }
    );
    Ok(if ok { 0 } else { 2 })
}

fn cs_knot(a: i64, c: u32) -> anyhow::Result<u8> {
    let roots = csknot::root_intervals(a)?;
    println!(
        "f_a at 1/a, 1/2, 1−1/a, a−2, a: {}",
        roots.values.join(", ")
    );
    println!(
        "sign pattern (−,+,−,−,+): {}",
        if roots.ok { "ok" } else { "FAIL" }
    );
    let order = csknot::quotient_order(a, c)?;
    let bound = csknot::order_bound(a, c);
    println!("|det(A^c − I)| = {}", csknot::resultant_order(a, c)?);
    println!("quotient order c·|det(A^c − I)| = {order}");
    println!(
        "c·a^(c−1) = {bound}; order exceeds bound: {}",
        order > bound
    );
    if a <= 3 * c as i64 {
        println!("note: a ≤ 3c, outside the range of the distinctness statement");
    }
    Ok(0)
}

fn linking(path: &Path) -> anyhow::Result<u8> {
    let input = manifold_input(read_json(path)?)?;
    let pairing = match &input {
        ManifoldInput::LinkingPairing { factors, gram, .. } => {
            Some(report::parse_pairing(factors, gram)?)
        }
        ManifoldInput::LinkingMatrix { matrix } => {
            let rows: Vec<&[i64]> = matrix.iter().map(Vec::as_slice).collect();
            torsion::linking_from_matrix(&hsobstruct::zlinalg::IntMatrix::from_i64(&rows))?
        }
        _ => bail!("expected a linking_pairing or linking_matrix input"),
    };
    let Some(p) = pairing else {
        println!("torsion is trivial");
        return Ok(0);
    };
    let group = p.group();
    println!("group: {group}");
    println!("direct double: {}", group.is_direct_double());
    let mut code = if group.is_direct_double() { 0 } else { 2 };
    match torsion::is_hyperbolic(&p) {
        Ok(Some(w)) => {
            println!("hyperbolic: true");
            println!("  lagrangian: {:?}", w.lagrangian);
            println!("  complement: {:?}", w.complement);
        }
        Ok(None) => {
            println!("hyperbolic: false");
            code = 2;
        }
        Err(e) => println!("hyperbolic: not decided ({e})"),
    }
    Ok(code)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Report { file, radius, json } => {
            run_report(&manifold_input(read_json(&file)?)?, radius, json.as_deref())
        }
        Command::ChiSet { beta } => {
            chi_set(beta);
            Ok(0)
        }
        Command::SplitSearch {
            form,
            gamma,
            radius,
        } => split_search(&form, gamma, radius),
        Command::Seifert { file, radius } => {
            let input = manifold_input(read_json(&file)?)?;
            if !matches!(input, ManifoldInput::Seifert { .. }) {
                bail!("expected Seifert data");
            }
            run_report(&input, radius, None)
        }
        Command::MasseyVerify {
            e,
            samples,
            seed,
            bound,
        } => massey_verify(e, samples, seed, bound),
        Command::CsKnot { a, c } => cs_knot(a, c),
        Command::Linking { file } => linking(&file),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
