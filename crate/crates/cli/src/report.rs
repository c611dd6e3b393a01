//! JSON shapes emitted by the subcommands. Every report re-parses through
//! [`AnyReport`], which is what `validate` uses.

use leibniz3::catalog::CatalogFile;
use leibniz3::classify::ClassificationReport;
use leibniz3::suite::SuiteReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
pub struct TraceEntry {
    pub word: String,
    pub expression: String,
    pub multidegree: Vec<u32>,
    pub value: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TracesReport {
    pub family: String,
    pub m: usize,
    pub traces: Vec<TraceEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ApiComparison {
    pub invariant_dim: usize,
    pub trace_dim: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub multidegree: Vec<u32>,
    pub candidates: usize,
    pub dim: usize,
    pub basis: Vec<String>,
    pub generated_dim: usize,
    pub equal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub api: Option<ApiComparison>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub family: String,
    pub m: usize,
    pub bound: u32,
    pub branches: Vec<String>,
    pub diag_pruning: bool,
    pub generators: Vec<String>,
    pub not_invariant: Vec<String>,
    pub generation_holds: bool,
    pub degrees: Vec<DegreeEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BranchEntry {
    pub name: String,
    pub matrix: Vec<Vec<String>>,
    pub nonvanishing: Vec<String>,
    pub parameters: usize,
    pub verified: bool,
    #[serde(default)]
    pub failure: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AutReport {
    pub family: String,
    pub branches: Vec<BranchEntry>,
    pub diagonal: Vec<BranchEntry>,
    pub parameter_count: usize,
    pub derivation_dim: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct InfoReport {
    pub family: String,
    pub products: Vec<String>,
    pub leib_dim: usize,
    pub ann_r_dim: usize,
    pub ncl: Option<usize>,
    pub nilpotency: leibniz3::algebra::Nilpotency,
    pub aut_dim: usize,
    pub commutative: bool,
    pub generators_m2: Vec<String>,
}

/// Tried in order; fields are required so the shapes do not overlap.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum AnyReport {
    Suite(SuiteReport),
    Classification(Box<ClassificationReport>),
    Invariants(InvariantsReport),
    Traces(TracesReport),
    Aut(AutReport),
    Info(InfoReport),
    Catalog(Box<CatalogFile>),
}

impl AnyReport {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyReport::Suite(_) => "verification suite",
            AnyReport::Classification(_) => "classification",
            AnyReport::Invariants(_) => "invariants",
            AnyReport::Traces(_) => "traces",
            AnyReport::Aut(_) => "automorphisms",
            AnyReport::Info(_) => "info",
            AnyReport::Catalog(_) => "catalog",
        }
    }

    /// Internal consistency beyond the shape.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            AnyReport::Suite(s) => {
                if s.version != leibniz3::suite::REPORT_VERSION {
                    out.push(format!("unsupported report version {}", s.version));
                }
                if s.all_pass != s.checks.iter().all(|c| c.pass) {
                    out.push("all_pass disagrees with the individual checks".into());
                }
            }
            AnyReport::Invariants(r) => {
                for d in &r.degrees {
                    if d.dim != d.basis.len() || d.equal != (d.dim == d.generated_dim) {
                        out.push(format!("inconsistent entry at {:?}", d.multidegree));
                    }
                }
            }
            AnyReport::Classification(c) => {
                let classified = c.outcome == leibniz3::classify::Outcome::Classified;
                if classified != c.family.is_some() {
                    out.push("outcome and family disagree".into());
                }
            }
            AnyReport::Traces(t) => {
                for e in &t.traces {
                    if e.multidegree.len() != t.m {
                        out.push(format!("{}: multidegree has {} entries, expected {}", e.word, e.multidegree.len(), t.m));
                    }
                }
            }
            AnyReport::Aut(a) => {
                for b in a.branches.iter().chain(&a.diagonal) {
                    if b.verified == b.failure.is_some() {
                        out.push(format!("branch {}: verified flag disagrees with failure", b.name));
                    }
                }
            }
            AnyReport::Info(i) => {
                if i.ncl != i.nilpotency.class() {
                    out.push("ncl disagrees with the nilpotency record".into());
                }
            }
            AnyReport::Catalog(c) => {
                if c.version != leibniz3::catalog::CATALOG_VERSION {
                    out.push(format!("unsupported catalog version {}", c.version));
                }
            }
        }
        out
    }
}
