//! `leibniz3` — verification suite, classifier and explorers for the
//! three-dimensional non-Lie Leibniz algebras.

mod report;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use leibniz3::algebra::StructureTable;
use leibniz3::aut::{verify_branch, Branch};
use leibniz3::catalog::{self, Family, FamilyRecord};
use leibniz3::classify::{self, Outcome};
use leibniz3::exact::{PivotContext, Poly, Rational};
use leibniz3::invariants::{self, InvariantOptions};
use leibniz3::par::Strategy;
use leibniz3::suite::{self, Suite};
use leibniz3::trace::{self, TraceWord};
use rand::SeedableRng;

use report::*;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(name = "leibniz3", version, about = "Exact checks for 3-dimensional non-Lie Leibniz algebras")]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification suite (exit 0 when every check passes)
    Verify {
        /// Seed for the random basis changes of the classifier round trip
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Classify a rational structure table given as JSON (`-` for stdin).
    ///
    /// Exit codes: 0 classified, 2 not Leibniz, 3 Lie, 4 unrecognized.
    /// Non-nilpotent tables are matched by tr(χ1χ0), tr(χ0χ1),
    /// tr((χ0χ1)χ1) and d = dim Der; nilpotent ones by ncl, dim Ann^R and
    /// commutativity (λ of L4 is reported only when it is pinned to 0).
    Classify {
        path: PathBuf,
        /// Rewrite the table in a random rational basis first
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Operator traces of a family
    Traces {
        family: Family,
        #[arg(long)]
        lambda: Option<Rational>,
        /// A single word such as `R1.R2` or `L(1*2)`
        #[arg(long)]
        word: Option<TraceWord>,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Largest total degree when listing all words
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
    /// Invariant components and generator check
    Invariants {
        family: Family,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Total-degree bound (defaults: 4 for m = 1, 3 for m = 2, multidegree 1…1 otherwise)
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long)]
        lambda: Option<Rational>,
        /// Compare with the span of the trace subalgebra
        #[arg(long)]
        check_api: bool,
        /// Solve without pruning by the diagonal subgroup
        #[arg(long)]
        no_prune: bool,
    },
    /// Automorphism branches and their verification
    Aut {
        family: Family,
        #[arg(long)]
        lambda: Option<Rational>,
    },
    /// Structural dimensions of a family
    Info {
        family: Family,
        #[arg(long)]
        lambda: Option<Rational>,
    },
    /// Print the bundled catalog
    Catalog,
    /// Check that a JSON report (`-` for stdin) parses and is consistent
    Validate { path: PathBuf },
}

/// Failures carrying an exit code.
struct Exit(u8, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Exit {
    fn from(e: E) -> Self {
        Exit(EXIT_FAILURE, e.into())
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Exit {
    Exit(EXIT_USAGE, e.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let strategy = match configure_threads() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli, strategy) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

/// LEIBNIZ_THREADS caps the worker pool; 1 runs everything sequentially.
fn configure_threads() -> Result<Strategy> {
    let Ok(v) = std::env::var("LEIBNIZ_THREADS") else {
        return Ok(Strategy::default());
    };
    let n: usize = v.trim().parse().map_err(|_| anyhow!("LEIBNIZ_THREADS must be a positive integer, got `{v}`"))?;
    if n == 0 {
        return Err(anyhow!("LEIBNIZ_THREADS must be positive"));
    }
    if n == 1 {
        return Ok(Strategy::Sequential);
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("building the thread pool")?;
    Ok(Strategy::default())
}

fn record(f: Family, lambda: Option<Rational>) -> Result<FamilyRecord, Exit> {
    catalog::get_family(f, lambda).map_err(usage)
}

fn short(p: &Poly) -> String {
    p.display_short().to_string()
}

fn emit<T: serde::Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> Result<(), Exit> {
    if json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn read_input(path: &PathBuf) -> Result<String, Exit> {
    let mut s = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Exit(EXIT_IO, anyhow!("reading {}: {e}", path.display())))?;
    Ok(s)
}

fn run(cli: Cli, strategy: Strategy) -> Result<u8, Exit> {
    let json = cli.json;
    match cli.command {
        Command::Verify { seed } => {
            let mut s = Suite::standard(strategy);
            s.seed = seed;
            let rep = s.run();
            emit(json, &rep, || {
                let mut out = String::new();
                for c in &rep.checks {
                    let id = c.id.map_or("  -".to_string(), |k| format!("{k:>3}"));
                    let verdict = if c.pass { "PASS" } else { "FAIL" };
                    out += &format!("{id} {verdict} {:>8.1} ms  {} [{}]\n", c.runtime_ms, c.claim, c.anchor);
                    for d in &c.details {
                        out += &format!("        {d}\n");
                    }
                }
                for w in &rep.warnings {
                    out += &format!("warning: {w}\n");
                }
                out += if rep.all_pass { "all checks passed\n" } else { "some checks FAILED\n" };
                out
            })?;
            Ok(if rep.all_pass { 0 } else { EXIT_FAILURE })
        }
        Command::Classify { path, seed } => {
            let text = read_input(&path)?;
            let mut table: StructureTable =
                serde_json::from_str(&text).map_err(|e| Exit(EXIT_DATA, anyhow!("invalid table: {e}")))?;
            if let Some(seed) = seed {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                table = classify::random_conjugate(&table, &mut rng);
            }
            let rep = classify::classify(&table).map_err(|e| Exit(EXIT_DATA, e.into()))?;
            emit(json, &rep, || classification_text(&rep))?;
            Ok(rep.outcome.exit_code() as u8)
        }
        Command::Traces { family, lambda, word, m, bound } => {
            let rec = record(family, lambda)?;
            let words = match &word {
                Some(w) => vec![w.clone()],
                None => trace::enumerate_trace_words(bound, m),
            };
            let m = words.iter().map(TraceWord::max_copy).max().unwrap_or(1).max(if word.is_some() { 1 } else { m });
            let values = trace::trace_many(&rec.table, &words, strategy)?;
            let rep = TracesReport {
                family: rec.label(),
                m,
                traces: values
                    .iter()
                    .map(|v| TraceEntry {
                        word: v.word.to_string(),
                        expression: v.word.expression(),
                        multidegree: v.word.multidegree(m),
                        value: short(&v.value),
                    })
                    .collect(),
            };
            emit(json, &rep, || {
                if word.is_some() {
                    format!("{}\n", rep.traces[0].value)
                } else {
                    rep.traces.iter().map(|t| format!("{:<14} {:<24} {}\n", t.word, t.expression, t.value)).collect()
                }
            })?;
            Ok(0)
        }
        Command::Invariants { family, m, bound, lambda, check_api, no_prune } => {
            if m == 0 {
                return Err(usage(anyhow!("--m must be at least 1")));
            }
            let rec = record(family, lambda)?;
            let degrees = match bound {
                Some(b) => trace::multidegrees_up_to(b, m),
                None => invariants::default_degrees(m),
            };
            let bound = bound.unwrap_or_else(|| degrees.iter().map(|d| d.iter().sum()).max().unwrap_or(0));
            let rep = invariants_report(&rec, m, bound, &degrees, check_api, !no_prune, strategy)?;
            emit(json, &rep, || invariants_text(&rep))?;
            Ok(if rep.generation_holds { 0 } else { EXIT_FAILURE })
        }
        Command::Aut { family, lambda } => {
            let rec = record(family, lambda)?;
            let entry = |b: &Branch| {
                let w = verify_branch(&rec.table, b);
                let mat = b.matrix();
                BranchEntry {
                    name: b.name.clone(),
                    matrix: (0..mat.rows()).map(|i| mat.row(i).iter().map(short).collect()).collect(),
                    nonvanishing: b.nonvanishing.iter().map(short).collect(),
                    parameters: b.params().len(),
                    verified: w.is_none(),
                    failure: w.map(|w| format!("fails on (e{}, e{})", w.i + 1, w.j + 1)),
                }
            };
            let ctx = PivotContext::strict(rec.table.constraints().to_vec());
            let rep = AutReport {
                family: rec.label(),
                branches: rec.aut.branches.iter().map(entry).collect(),
                diagonal: rec.diag.as_ref().map(|d| d.branches().iter().map(entry).collect()).unwrap_or_default(),
                parameter_count: rec.aut.parameter_count(),
                derivation_dim: rec.table.derivation_dim(&ctx)?,
            };
            emit(json, &rep, || {
                let mut out = format!("{}: {} parameters, dim Der = {}\n", rep.family, rep.parameter_count, rep.derivation_dim);
                for b in rep.branches.iter().chain(&rep.diagonal) {
                    let status = if b.verified { "ok" } else { b.failure.as_deref().unwrap_or("FAIL") };
                    out += &format!("  {} [{status}] nonvanishing: {}\n", b.name, b.nonvanishing.join(", "));
                    for row in &b.matrix {
                        out += &format!("    [{}]\n", row.join(", "));
                    }
                }
                out
            })?;
            let ok = rep.branches.iter().chain(&rep.diagonal).all(|b| b.verified);
            Ok(if ok { 0 } else { EXIT_FAILURE })
        }
        Command::Info { family, lambda } => {
            let rec = record(family, lambda)?;
            let t = &rec.table;
            let ctx = PivotContext::strict(t.constraints().to_vec());
            let nil = t.nilpotency_class(t.default_nilpotency_cap(), &ctx)?;
            let mut products = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    let v = t.product(i, j);
                    if v.iter().any(|p| !p.is_zero()) {
                        let terms: Vec<String> = v
                            .iter()
                            .enumerate()
                            .filter(|(_, p)| !p.is_zero())
                            .map(|(l, p)| if *p == Poly::one() { format!("e{}", l + 1) } else { format!("({})·e{}", short(p), l + 1) })
                            .collect();
                        products.push(format!("e{}e{} = {}", i + 1, j + 1, terms.join(" + ")));
                    }
                }
            }
            let rep = InfoReport {
                family: rec.label(),
                products,
                leib_dim: t.leib_ideal(&ctx)?.dim(),
                ann_r_dim: t.right_annihilator(&ctx)?.dim(),
                ncl: nil.class(),
                nilpotency: nil,
                aut_dim: t.derivation_dim(&ctx)?,
                commutative: t.is_commutative(),
                generators_m2: rec.generators(2).iter().map(short).collect(),
            };
            emit(json, &rep, || {
                let ncl = rep.ncl.map_or("∞".to_string(), |k| k.to_string());
                let mut out = format!("{}\n  {}\n", rep.family, rep.products.join(", "));
                out += &format!("  Leib = {}, Ann^R = {}, ncl = {ncl}, dim Aut = {}\n", rep.leib_dim, rep.ann_r_dim, rep.aut_dim);
                if let Some(w) = suite::cap_warning(&rep.nilpotency) {
                    out += &format!("  warning: {w}\n");
                }
                let mut gens = vec!["1".to_string()];
                gens.extend(rep.generators_m2.iter().cloned());
                out += &format!("  invariant generators (m = 2): {}\n", gens.join(", "));
                out
            })?;
            Ok(0)
        }
        Command::Catalog => {
            let file = catalog::load_shipped_catalog()?;
            emit(json, &file, || {
                let mut out = format!("catalog version {}\n", file.version);
                for r in &file.records {
                    out += &format!(
                        "  {:<6} branches {}  dim Aut {}  ncl {}\n",
                        r.label(),
                        r.aut.branches.len(),
                        r.expected_aut_dim,
                        r.expected_ncl.map_or("∞".to_string(), |k| k.to_string())
                    );
                }
                out
            })?;
            Ok(0)
        }
        Command::Validate { path } => {
            let text = read_input(&path)?;
            let rep: AnyReport =
                serde_json::from_str(&text).map_err(|e| Exit(EXIT_DATA, anyhow!("not a recognized report: {e}")))?;
            let problems = rep.problems();
            if problems.is_empty() {
                println!("valid {} report", rep.kind());
                Ok(0)
            } else {
                for p in &problems {
                    eprintln!("invalid: {p}");
                }
                Ok(EXIT_DATA)
            }
        }
    }
}

fn classification_text(rep: &classify::ClassificationReport) -> String {
    let mut out = match rep.outcome {
        Outcome::Classified => format!("{}\n", rep.label),
        Outcome::NotLeibniz => "not a Leibniz algebra\n".to_string(),
        Outcome::Lie => "Lie algebra (out of scope)\n".to_string(),
        Outcome::Unrecognized => "unrecognized\n".to_string(),
    };
    if let Some(l) = &rep.recovered_lambda {
        out += &format!("  λ = {l}\n");
    }
    if let Some(n) = &rep.nilpotency {
        out += &format!("  nilpotency: {}\n", n.class().map_or("not nilpotent".to_string(), |k| format!("class {k}")));
    }
    if let Some(e) = &rep.evidence {
        let vec = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        out += &format!("  tr(χ1χ0) = ({})  tr(χ0χ1) = ({})\n", vec(&e.tr_left), vec(&e.tr_right));
        out += &format!("  tr((χ0χ1)χ1) = {}\n", short(&e.tr_degree2));
        out += &format!(
            "  d = {}, Leib = {}, Ann^R = {}, commutative = {}\n",
            e.derivation_dim, e.leib_dim, e.ann_r_dim, e.commutative
        );
    }
    for n in &rep.notes {
        out += &format!("  note: {n}\n");
    }
    out
}

fn invariants_report(
    rec: &FamilyRecord,
    m: usize,
    bound: u32,
    degrees: &[Vec<u32>],
    check_api: bool,
    prune: bool,
    strategy: Strategy,
) -> Result<InvariantsReport, Exit> {
    let opts = InvariantOptions { diag_pruning: prune, strategy };
    let space = invariants::invariant_space(rec, m, degrees, opts)?;
    let ctx = PivotContext::strict(rec.table.constraints().to_vec());
    let gens = rec.generators(m);
    let gen = invariants::check_generation(&rec.aut, &gens, &space, &ctx, strategy)?;
    let api = if check_api {
        let generic = if rec.lambda().is_none() { PivotContext::generic() } else { ctx.clone() };
        let span = trace::trace_subalgebra_span(&rec.table, bound, m, &generic, strategy)?;
        Some(span.into_iter().map(|(d, b)| (d, b.len())).collect::<std::collections::BTreeMap<_, _>>())
    } else {
        None
    };
    let degrees = space
        .components
        .iter()
        .zip(&gen.degrees)
        .map(|(c, g)| DegreeEntry {
            multidegree: c.multidegree.clone(),
            candidates: c.candidates,
            dim: c.basis.len(),
            basis: c.basis.iter().map(short).collect(),
            generated_dim: g.generated_dim,
            equal: g.generated_dim == c.basis.len(),
            api: api.as_ref().map(|a| ApiComparison {
                invariant_dim: c.basis.len(),
                trace_dim: a.get(&c.multidegree).copied().unwrap_or(0),
            }),
        })
        .collect();
    Ok(InvariantsReport {
        family: rec.label(),
        m,
        bound,
        branches: space.branches.clone(),
        diag_pruning: prune,
        generators: gens.iter().map(short).collect(),
        not_invariant: gen.not_invariant.iter().map(short).collect(),
        generation_holds: gen.holds,
        degrees,
    })
}

fn invariants_text(rep: &InvariantsReport) -> String {
    let mut out = format!("{}: m = {}, bound {}\n", rep.family, rep.m, rep.bound);
    let mut gens = vec!["1".to_string()];
    gens.extend(rep.generators.iter().cloned());
    out += &format!("  claimed generators: {}\n", gens.join(", "));
    for d in &rep.degrees {
        let verdict = if d.equal { "=" } else { "≠" };
        out += &format!("  {:?}: dim {} {verdict} {} generated", d.multidegree, d.dim, d.generated_dim);
        if let Some(a) = &d.api {
            out += &format!(", traces {}", a.trace_dim);
        }
        out += "\n";
        for b in &d.basis {
            out += &format!("      {b}\n");
        }
    }
    for g in &rep.not_invariant {
        out += &format!("  NOT invariant: {g}\n");
    }
    out += if rep.generation_holds { "  generation verified up to the bound\n" } else { "  generation FAILS\n" };
    out
}
