//! Command-line front end. Exit codes: 0 success, 1 a structural
//! invariant failed (violation printed as JSON on stdout), 2 the input
//! could not be read or parsed.

use braidq::doc::{self, Body, Document};
use braidq::linear::{constant_cocycle, Scalar};
use braidq::search::{classify, enumerate_solutions, ClassifyMode, SearchSpec};
use braidq::solution::NonDegenerateSolution;
use braidq::{Check, Violation};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::One;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "braidq", version, about = "set-theoretical braidings on quivers")]
struct Cli {
    /// seed for any randomized step; fixed default keeps runs reproducible
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// node budget for backtracking searches
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// word-length bound for equivalence checks
    #[arg(long, global = true, default_value_t = 3)]
    nmax: usize,
    /// release skips the slower cross-checking assertions
    #[arg(long, global = true, value_enum, default_value_t = AssertLevel::Debug)]
    assert_level: AssertLevel,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum AssertLevel {
    Debug,
    Release,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a document and run its structural invariants
    Validate { file: PathBuf },
    /// Validate, then print a diagnostic report
    Check { file: PathBuf },
    /// Universal braided groupoid acting on a solution document
    StructureGroupoid { file: PathBuf },
    /// Derived rack bundle of a solution document
    DeriveRack { file: PathBuf },
    /// Braiding matrix of a solution, optionally twisted by a cocycle
    Linearize {
        file: PathBuf,
        /// JSON array of [x, y, "n/d"] entries
        #[arg(long)]
        cocycle: Option<PathBuf>,
    },
    /// Face model of a solution, optionally twisted by a cocycle
    Facemodel {
        file: PathBuf,
        #[arg(long)]
        cocycle: Option<PathBuf>,
    },
    /// All non-degenerate solutions on a quiver document
    Enumerate {
        file: PathBuf,
        /// keep only one solution per quiver-symmetry orbit
        #[arg(long)]
        reduce: bool,
    },
    /// Enumerate and group solutions into equivalence classes
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Iso)]
        mode: Mode,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Iso,
    UEquivalence,
}

fn read_doc(path: &PathBuf) -> Check<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Violation::new("io", format!("{}: {e}", path.display())))?;
    doc::from_json(&text)
}

fn solution_of(d: &Document) -> Check<NonDegenerateSolution> {
    match &d.body {
        Body::Solution(s) => doc::solution_from_doc(s),
        _ => Err(Violation::new("kind", "expected a solution document")),
    }
}

fn quiver_of(d: &Document) -> Check<braidq::quiver::FiniteQuiver> {
    match &d.body {
        Body::Quiver(q) => doc::quiver_from_doc(q),
        _ => Err(Violation::new("kind", "expected a quiver document")),
    }
}

fn read_cocycle(
    path: &Option<PathBuf>,
    s: &NonDegenerateSolution,
) -> Check<BTreeMap<(usize, usize), Scalar>> {
    let Some(path) = path else {
        return Ok(constant_cocycle(s, Scalar::one()));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Violation::new("io", format!("{}: {e}", path.display())))?;
    let raw: Vec<[String; 3]> =
        serde_json::from_str(&text).map_err(|e| Violation::new("parse", e.to_string()))?;
    let q = s.quiver();
    let mut out = constant_cocycle(s, Scalar::one());
    for [x, y, v] in &raw {
        let x = q
            .arrow_by_id(x)
            .ok_or_else(|| Violation::new("unknown-arrow", x.clone()))?;
        let y = q
            .arrow_by_id(y)
            .ok_or_else(|| Violation::new("unknown-arrow", y.clone()))?;
        if !out.contains_key(&(x, y)) {
            return Err(Violation::new("cocycle-domain", format!("({x}, {y}) not composable")));
        }
        out.insert((x, y), doc::parse_scalar(v)?);
    }
    Ok(out)
}

#[derive(Serialize)]
struct CheckReport {
    kind: String,
    valid: bool,
    involutive: Option<bool>,
    symmetric: Option<bool>,
}

#[derive(Serialize)]
struct ClassifyReport {
    solutions: Vec<Document>,
    classes: Vec<Vec<usize>>,
    representatives: Vec<usize>,
}

fn kind_name(d: &Document) -> &'static str {
    match d.body {
        Body::Quiver(_) => "quiver",
        Body::Groupoid(_) => "groupoid",
        Body::Solution(_) => "solution",
        Body::MatchedPair(_) => "matched-pair",
        Body::RackBundle(_) => "rack-bundle",
        Body::FaceModel(_) => "face-model",
        Body::BraidedGroupoid(_) => "braided-groupoid",
        Body::Matrix(_) => "matrix",
        Body::StructuralPair(_) => "structural-pair",
    }
}

fn run(cli: &Cli) -> Check<String> {
    let spec = SearchSpec {
        node_budget: cli.budget.unwrap_or(SearchSpec::default().node_budget),
        ..SearchSpec::default()
    };
    match &cli.cmd {
        Cmd::Validate { file } => {
            let d = read_doc(file)?;
            doc::validate(&d)?;
            Ok(format!("valid: {}\n", kind_name(&d)))
        }
        Cmd::Check { file } => {
            let d = read_doc(file)?;
            doc::validate(&d)?;
            let mut report = CheckReport {
                kind: kind_name(&d).to_string(),
                valid: true,
                involutive: None,
                symmetric: None,
            };
            if let Body::Solution(_) = &d.body {
                let s = solution_of(&d)?;
                report.involutive = Some(s.is_involutive());
                if cli.assert_level == AssertLevel::Debug {
                    // cross-check with the independent search-side verifier
                    braidq::search::naive_check(s.quiver(), &s.table())?;
                }
            }
            if let Body::BraidedGroupoid(b) = &d.body {
                let b = doc::braided_from_doc(b)?;
                report.symmetric = Some(braidq::braided::is_symmetric(&b)?);
            }
            Ok(serde_json::to_string_pretty(&report).unwrap() + "\n")
        }
        Cmd::StructureGroupoid { file } => {
            let s = solution_of(&read_doc(file)?)?;
            let sp = braidq::braided::reduced_structure_groupoid(&s)?;
            Ok(doc::to_json(&doc::wrap(Body::StructuralPair(doc::structural_pair_doc(
                &sp, &s,
            )))))
        }
        Cmd::DeriveRack { file } => {
            let s = solution_of(&read_doc(file)?)?;
            let (rack, _) = braidq::rack::derived_solution(&s)?;
            Ok(doc::to_json(&doc::wrap(Body::RackBundle(doc::rack_doc(&rack)))))
        }
        Cmd::Linearize { file, cocycle } => {
            let s = solution_of(&read_doc(file)?)?;
            let q = read_cocycle(cocycle, &s)?;
            let m = braidq::linear::sigma_q(&s, &q)?;
            braidq::linear::check_matrix_braid(s.quiver(), &m)?;
            Ok(doc::to_json(&doc::wrap(Body::Matrix(doc::matrix_doc(&m)))))
        }
        Cmd::Facemodel { file, cocycle } => {
            let s = solution_of(&read_doc(file)?)?;
            let q = read_cocycle(cocycle, &s)?;
            let fm = braidq::linear::face_model_from_solution(&s, &q)?;
            Ok(doc::to_json(&doc::wrap(Body::FaceModel(doc::face_model_doc(&fm)))))
        }
        Cmd::Enumerate { file, reduce } => {
            let q = quiver_of(&read_doc(file)?)?;
            let spec = SearchSpec { symmetry_reduction: *reduce, ..spec };
            let out = enumerate_solutions(&q, &spec)?;
            if !out.exhaustive {
                return Err(Violation::new("budget", format!("stopped after {} nodes", out.nodes)));
            }
            let docs: Vec<Document> = out
                .solutions
                .iter()
                .map(|s| doc::wrap(Body::Solution(doc::solution_doc(s))))
                .collect();
            Ok(serde_json::to_string_pretty(&docs).unwrap() + "\n")
        }
        Cmd::Classify { file, mode } => {
            let q = quiver_of(&read_doc(file)?)?;
            let out = enumerate_solutions(&q, &spec)?;
            if !out.exhaustive {
                return Err(Violation::new("budget", format!("stopped after {} nodes", out.nodes)));
            }
            let mode = match mode {
                Mode::Iso => ClassifyMode::Iso,
                Mode::UEquivalence => ClassifyMode::UEquivalence,
            };
            let c = classify(&out.solutions, mode);
            let report = ClassifyReport {
                solutions: out
                    .solutions
                    .iter()
                    .map(|s| doc::wrap(Body::Solution(doc::solution_doc(s))))
                    .collect(),
                classes: c.classes,
                representatives: c.representatives,
            };
            Ok(serde_json::to_string_pretty(&report).unwrap() + "\n")
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(v) => {
            let input_error = matches!(
                v.rule.as_str(),
                "io" | "parse" | "version" | "kind" | "unknown-vertex" | "unknown-arrow"
                    | "unknown-element"
            );
            if input_error {
                eprintln!("error: {}: {}", v.rule, v.witness);
                ExitCode::from(2)
            } else {
                println!(
                    "{}",
                    serde_json::json!({"rule": v.rule, "witness": v.witness})
                );
                ExitCode::from(1)
            }
        }
    }
}
