//! The eleven families of three-dimensional non-Lie Leibniz algebras with
//! their automorphism groups, diagonal automorphisms, invariant generators
//! and operator-trace tables.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{basis_element, Element, StructureTable};
use crate::aut::{AutFamily, Branch, DiagWeight, DiagonalFamily};
use crate::exact::linalg::PolyMatrix;
use crate::exact::{Param, Poly, Rational, Substitution, Var};
use crate::trace::{Side, TraceArg, TraceWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    L7,
    L8,
    L9,
    L10,
    L11,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::L1,
        Family::L2,
        Family::L3,
        Family::L4,
        Family::L5,
        Family::L6,
        Family::L7,
        Family::L8,
        Family::L9,
        Family::L10,
        Family::L11,
    ];

    pub fn has_lambda(self) -> bool {
        matches!(self, Family::L2 | Family::L4 | Family::L7)
    }

    pub fn is_nilpotent(self) -> bool {
        matches!(self, Family::L4 | Family::L5 | Family::L8 | Family::L11)
    }

    /// Values of λ for which the family is not defined.
    pub fn excluded_lambda(self) -> Vec<Rational> {
        match self {
            Family::L2 => vec![Rational::zero()],
            _ => Vec::new(),
        }
    }

    /// The fixed sample of λ values, minus exclusions.
    pub fn lambda_samples(self) -> Vec<Rational> {
        if !self.has_lambda() {
            return Vec::new();
        }
        let excl = self.excluded_lambda();
        LAMBDA_SAMPLES.iter().map(|&(p, q)| Rational::new(p, q)).filter(|l| !excl.contains(l)).collect()
    }
}

pub const LAMBDA_SAMPLES: [(i64, i64); 5] = [(1, 1), (2, 1), (3, 1), (-2, 1), (5, 7)];

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, CatalogError> {
        let t = s.trim().trim_start_matches(['L', 'l']);
        let k: usize = t.parse().map_err(|_| CatalogError::UnknownFamily(s.to_string()))?;
        Family::ALL.get(k.wrapping_sub(1)).copied().ok_or_else(|| CatalogError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown family `{0}` (expected L1..L11)")]
    UnknownFamily(String),
    #[error("λ = {lambda} is not admissible for {family}")]
    InadmissibleLambda { family: Family, lambda: Rational },
    #[error("{0} has no parameter λ")]
    NoParameter(Family),
}

/// How λ enters a record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Family without a parameter.
    Fixed,
    /// λ kept as an indeterminate (generic nonzero λ).
    Symbolic,
    Value(Rational),
}

/// One row of the expected trace table, for copies r, s: the word and the
/// coefficient c with tr = c·z_r (degree 1) or c·z_r·z_s (degree 2).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedTrace {
    pub label: String,
    pub shape: TraceShape,
    pub coefficient: Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceShape {
    /// tr(χ_rχ₀)
    Left,
    /// tr(χ₀χ_r)
    Right,
    /// tr(χ_r(χ_sχ₀))
    LeftLeft,
    /// tr((χ_sχ₀)χ_r)
    RightLeft,
    /// tr(χ_r(χ₀χ_s))
    LeftRight,
    /// tr((χ₀χ_s)χ_r)
    RightRight,
    /// tr((χ_rχ_s)χ₀)
    PairLeft,
    /// tr(χ₀(χ_rχ_s))
    PairRight,
}

impl TraceShape {
    pub fn word(self, r: usize, s: usize) -> TraceWord {
        use TraceArg::*;
        let f = match self {
            TraceShape::Left => vec![(Side::L, Single(r))],
            TraceShape::Right => vec![(Side::R, Single(r))],
            TraceShape::LeftLeft => vec![(Side::L, Single(r)), (Side::L, Single(s))],
            TraceShape::RightLeft => vec![(Side::R, Single(r)), (Side::L, Single(s))],
            TraceShape::LeftRight => vec![(Side::L, Single(r)), (Side::R, Single(s))],
            TraceShape::RightRight => vec![(Side::R, Single(r)), (Side::R, Single(s))],
            TraceShape::PairLeft => vec![(Side::L, Pair(r, s))],
            TraceShape::PairRight => vec![(Side::R, Pair(r, s))],
        };
        TraceWord::new(f)
    }

    /// The coordinate monomial multiplying the coefficient.
    pub fn monomial(self, r: usize, s: usize) -> Poly {
        match self {
            TraceShape::Left | TraceShape::Right => z(r),
            _ => &z(r) * &z(s),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TraceShape::Left => "tr(χrχ0)",
            TraceShape::Right => "tr(χ0χr)",
            TraceShape::LeftLeft => "tr(χr(χsχ0))",
            TraceShape::RightLeft => "tr((χsχ0)χr)",
            TraceShape::LeftRight => "tr(χr(χ0χs))",
            TraceShape::RightRight => "tr((χ0χs)χr)",
            TraceShape::PairLeft => "tr((χrχs)χ0)",
            TraceShape::PairRight => "tr(χ0(χrχs))",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub family: Family,
    pub regime: Regime,
    pub table: StructureTable,
    pub aut: AutFamily,
    pub diag: Option<DiagonalFamily>,
    pub expected_traces: Vec<ExpectedTrace>,
    pub expected_aut_dim: usize,
    pub expected_ncl: Option<usize>,
    pub expected_ann_r: Option<usize>,
}

impl FamilyRecord {
    /// Short label such as `L7^λ`, `L7^0` or `L2^(5/7)`.
    pub fn label(&self) -> String {
        match &self.regime {
            Regime::Fixed => self.family.to_string(),
            Regime::Symbolic => format!("{}^λ", self.family),
            Regime::Value(v) if v.is_integer() => format!("{}^{v}", self.family),
            Regime::Value(v) => format!("{}^({v})", self.family),
        }
    }

    pub fn lambda(&self) -> Option<&Rational> {
        match &self.regime {
            Regime::Value(v) => Some(v),
            _ => None,
        }
    }

    /// The λ = 0 regime of L4 and L7 has its own automorphism group.
    pub fn is_lambda_zero(&self) -> bool {
        self.lambda().is_some_and(Rational::is_zero)
    }

    /// Claimed invariant generators for m copies, without the constant 1.
    pub fn generators(&self, m: usize) -> Vec<Poly> {
        generators(self.family, m)
    }
}

fn lam() -> Poly {
    Poly::param(Param::Lambda)
}
fn mu() -> Poly {
    Poly::param(Param::Mu)
}
fn a(k: u8) -> Poly {
    Poly::param(Param::alpha(k))
}
fn c(n: i64) -> Poly {
    Poly::int(n)
}
fn x(r: usize) -> Poly {
    Poly::coord(r, 1)
}
fn y(r: usize) -> Poly {
    Poly::coord(r, 2)
}
fn z(r: usize) -> Poly {
    Poly::coord(r, 3)
}

fn e(i: usize) -> Element {
    basis_element(i - 1, 3)
}

fn times(p: Poly, v: Element) -> Element {
    v.into_iter().map(|q| q.mul_ref(&p)).collect()
}

fn plus(u: Element, v: Element) -> Element {
    u.iter().zip(&v).map(|(a, b)| a + b).collect()
}

/// Products e_i e_j with 1-based indices.
fn table(products: Vec<(usize, usize, Element)>) -> StructureTable {
    StructureTable::from_products(3, products.into_iter().map(|(i, j, v)| (i - 1, j - 1, v)))
}

/// Multiplication table with λ symbolic.
pub fn symbolic_table(f: Family) -> StructureTable {
    match f {
        Family::L1 => table(vec![(1, 3, times(c(-2), e(1))), (2, 2, e(1)), (2, 3, times(c(-1), e(2))), (3, 2, e(2))]),
        Family::L2 => table(vec![(1, 3, times(lam(), e(1))), (2, 3, times(c(-1), e(2))), (3, 2, e(2))])
            .with_constraints(vec![lam()]),
        Family::L3 => table(vec![(2, 3, times(c(-1), e(2))), (3, 2, e(2)), (3, 3, e(1))]),
        Family::L4 => table(vec![(2, 2, e(1)), (2, 3, e(1)), (3, 3, times(lam(), e(1)))]),
        Family::L5 => table(vec![(2, 2, e(1)), (3, 3, e(1))]),
        Family::L6 => table(vec![(1, 3, e(2)), (2, 3, e(1))]),
        Family::L7 => table(vec![(1, 3, e(2)), (2, 3, plus(times(lam(), e(1)), e(2)))]),
        Family::L8 => table(vec![(1, 3, e(2)), (3, 3, e(1))]),
        Family::L9 => table(vec![(1, 3, plus(e(1), e(2))), (3, 3, e(1))]),
        Family::L10 => table(vec![(1, 3, e(1)), (2, 3, e(2))]),
        Family::L11 => table(vec![(3, 3, e(1))]),
    }
}

fn m3(rows: [[Poly; 3]; 3]) -> PolyMatrix {
    PolyMatrix::from_rows(rows.into_iter().map(|r| r.to_vec()).collect())
}

fn branch(name: &str, rows: [[Poly; 3]; 3], nonvanishing: Vec<Poly>) -> Branch {
    Branch::new(name, m3(rows), nonvanishing).expect("catalog branches are invertible")
}

/// Automorphism branches. `lambda_zero` selects the separate λ = 0 groups of
/// L4 and L7; otherwise λ ≠ 0 is generic and 1/λ is written μ.
pub fn aut_family(f: Family, lambda_zero: bool) -> AutFamily {
    let half = Rational::new(1, 2);
    let b = match f {
        Family::L1 => vec![branch(
            "g",
            [[a(5).pow(2), &a(5) * &a(6), a(6).pow(2).scale(&half)], [c(0), a(5), a(6)], [c(0), c(0), c(1)]],
            vec![a(5)],
        )],
        Family::L2 => vec![branch("g", [[a(1), c(0), c(0)], [c(0), a(5), a(6)], [c(0), c(0), c(1)]], vec![a(1), a(5)])],
        Family::L3 => vec![branch("g", [[c(1), c(0), a(3)], [c(0), a(5), a(6)], [c(0), c(0), c(1)]], vec![a(5)])],
        Family::L4 if lambda_zero => vec![branch(
            "g",
            [[&a(5) * &(&a(5) + &a(8)), a(2), a(3)], [c(0), a(5), c(0)], [c(0), a(8), &a(5) + &a(8)]],
            vec![&a(5) + &a(8)],
        )],
        Family::L4 => {
            // (α6² + α6α9 + λα9²)/λ, α6/λ + α9, −α6/λ with μ = 1/λ
            let top = &(&mu() * &(&a(6).pow(2) + &(&a(6) * &a(9)))) + &a(9).pow(2);
            let g1 = [[top, a(2), a(3)], [c(0), &(&mu() * &a(6)) + &a(9), a(6)], [c(0), -(&mu() * &a(6)), a(9)]];
            let det = Branch::new("g1", m3(g1.clone()), Vec::new()).expect("invertible").determinant();
            let g1 = branch("g1", g1, vec![a(6), det]);
            vec![g1, branch("g2", [[a(5).pow(2), a(2), a(3)], [c(0), a(5), c(0)], [c(0), c(0), a(5)]], vec![a(5)])]
        }
        Family::L5 => {
            let s = &a(5).pow(2) + &a(6).pow(2);
            vec![
                branch("g1", [[s.clone(), a(2), a(3)], [c(0), a(5), a(6)], [c(0), -a(6), a(5)]], vec![a(5), s.clone()]),
                branch("g2", [[s.clone(), a(2), a(3)], [c(0), a(5), a(6)], [c(0), a(6), -a(5)]], vec![a(5), s.clone()]),
                branch("g3+", [[a(6).pow(2), a(2), a(3)], [c(0), c(0), a(6)], [c(0), a(6), c(0)]], vec![a(6)]),
                branch("g3-", [[a(6).pow(2), a(2), a(3)], [c(0), c(0), a(6)], [c(0), -a(6), c(0)]], vec![a(6)]),
            ]
        }
        Family::L6 => {
            let cond = &a(1).pow(2) - &a(4).pow(2);
            vec![
                branch("g1", [[a(1), a(4), c(0)], [a(4), a(1), c(0)], [c(0), c(0), c(1)]], vec![cond.clone()]),
                branch("g2", [[a(1), -a(4), c(0)], [a(4), -a(1), c(0)], [c(0), c(0), c(-1)]], vec![cond]),
            ]
        }
        Family::L7 if lambda_zero => vec![branch(
            "g",
            [[a(1), c(0), a(3)], [a(4), &a(1) + &a(4), -a(3)], [c(0), c(0), c(1)]],
            vec![&a(1) * &(&a(1) + &a(4))],
        )],
        Family::L7 => {
            let cond = &(&a(1).pow(2) + &(&a(1) * &a(4))) - &(&lam() * &a(4).pow(2));
            vec![branch("g", [[a(1), &lam() * &a(4), c(0)], [a(4), &a(1) + &a(4), c(0)], [c(0), c(0), c(1)]], vec![cond])]
        }
        Family::L8 => vec![branch(
            "g",
            [[a(9).pow(2), c(0), a(3)], [&a(3) * &a(9), a(9).pow(3), a(6)], [c(0), c(0), a(9)]],
            vec![a(9)],
        )],
        Family::L9 => vec![branch(
            "g",
            [[&c(1) + &a(3), c(0), a(3)], [a(3), c(1), a(6)], [c(0), c(0), c(1)]],
            vec![&c(1) + &a(3)],
        )],
        Family::L10 => vec![branch(
            "g",
            [[a(1), a(2), c(0)], [a(4), a(5), c(0)], [c(0), c(0), c(1)]],
            vec![&(&a(1) * &a(5)) - &(&a(2) * &a(4))],
        )],
        Family::L11 => vec![branch(
            "g",
            [[a(9).pow(2), a(2), a(3)], [c(0), a(5), a(6)], [c(0), c(0), a(9)]],
            vec![&a(5) * &a(9)],
        )],
    };
    AutFamily::new(b)
}

pub fn diagonal_family(f: Family) -> Option<DiagonalFamily> {
    let w = DiagWeight::new;
    let weights = match f {
        Family::L1 => vec![w(2, 0), w(1, 0), w(0, 0)],
        Family::L2 | Family::L10 => vec![w(1, 0), w(0, 1), w(0, 0)],
        Family::L3 => vec![w(0, 0), w(1, 0), w(0, 0)],
        Family::L4 => vec![w(2, 0), w(1, 0), w(1, 0)],
        Family::L5 => vec![w(2, 0), w(1, 0), DiagWeight::signed(1, 0)],
        Family::L6 | Family::L7 => vec![w(1, 0), w(1, 0), w(0, 0)],
        Family::L8 => vec![w(2, 0), w(3, 0), w(1, 0)],
        Family::L9 => return None,
        Family::L11 => vec![w(2, 0), w(0, 1), w(1, 0)],
    };
    Some(DiagonalFamily::new(weights))
}

/// Claimed generators of the invariant ring for m copies (constant 1 omitted).
pub fn generators(f: Family, m: usize) -> Vec<Poly> {
    let zs = || (1..=m).map(z).collect::<Vec<_>>();
    let pairs = || (1..=m).flat_map(|r| (r + 1..=m).map(move |s| (r, s)));
    match f {
        Family::L1 | Family::L2 | Family::L7 | Family::L10 => zs(),
        Family::L3 => {
            let mut g = zs();
            g.extend(pairs().map(|(r, s)| &(&x(r) * &z(s)) - &(&z(r) * &x(s))));
            g
        }
        Family::L4 | Family::L5 | Family::L8 | Family::L11 => Vec::new(),
        Family::L6 => (1..=m).flat_map(|r| (r..=m).map(move |s| &z(r) * &z(s))).collect(),
        Family::L9 => {
            let mut g = zs();
            g.extend(pairs().map(|(r, s)| &(&(&x(r) - &y(r)) * &z(s)) - &(&z(r) * &(&x(s) - &y(s)))));
            g
        }
    }
}

fn expected_trace_coefficients(f: Family) -> Vec<(TraceShape, Poly)> {
    use TraceShape::*;
    let one = || c(1);
    let row = |l: Poly, r: Poly, ll: Poly, rl: Poly, lr: Poly, rr: Poly| {
        vec![(Left, l), (Right, r), (LeftLeft, ll), (RightLeft, rl), (LeftRight, lr), (RightRight, rr)]
    };
    let zero6 = || row(c(0), c(0), c(0), c(0), c(0), c(0));
    match f {
        Family::L1 => row(one(), c(-3), one(), c(-1), c(-1), c(5)),
        Family::L2 => row(one(), &lam() - &c(1), one(), c(-1), c(-1), &c(1) + &lam().pow(2)),
        Family::L3 => {
            let mut v = row(one(), c(-1), one(), c(-1), c(-1), one());
            v.extend([(PairLeft, c(0)), (PairRight, c(0))]);
            v
        }
        Family::L4 | Family::L5 | Family::L8 | Family::L11 => zero6(),
        Family::L6 => row(c(0), c(0), c(0), c(0), c(0), c(2)),
        Family::L7 => row(c(0), one(), c(0), c(0), c(0), &c(1) + &lam().scale(&Rational::from_int(2))),
        Family::L9 => {
            let mut v = row(c(0), one(), c(0), c(0), c(0), one());
            v.extend([(PairLeft, c(0)), (PairRight, c(0))]);
            v
        }
        Family::L10 => row(c(0), c(2), c(0), c(0), c(0), c(2)),
    }
}

fn expected_aut_dim(f: Family, lambda_zero: bool) -> usize {
    match f {
        Family::L1 | Family::L6 | Family::L9 => 2,
        Family::L2 | Family::L3 | Family::L8 => 3,
        Family::L4 | Family::L5 | Family::L10 => 4,
        Family::L7 if lambda_zero => 3,
        Family::L7 => 2,
        Family::L11 => 5,
    }
}

fn expected_ncl(f: Family) -> Option<usize> {
    match f {
        Family::L4 | Family::L5 | Family::L11 => Some(3),
        Family::L8 => Some(4),
        _ => None,
    }
}

fn expected_ann_r(f: Family) -> Option<usize> {
    match f {
        Family::L5 => Some(1),
        Family::L11 => Some(2),
        _ => None,
    }
}

fn lambda_substitution(l: &Rational) -> Substitution {
    let mut s = Substitution::new();
    s.insert(Var::Param(Param::Lambda), Poly::constant(l.clone()));
    if let Some(inv) = l.recip() {
        s.insert(Var::Param(Param::Mu), Poly::constant(inv));
    }
    s
}

fn specialize_aut(fam: &AutFamily, sigma: &Substitution) -> AutFamily {
    AutFamily::new(
        fam.branches
            .iter()
            .map(|b| {
                let nonvanishing = b.nonvanishing.iter().map(|p| p.substitute(sigma)).filter(|p| !p.is_constant()).collect();
                Branch::new(b.name.clone(), b.matrix().map(|p| p.substitute(sigma)), nonvanishing)
                    .expect("specialization at admissible λ stays invertible")
            })
            .collect(),
    )
}

/// The record for a family, with λ symbolic (`None`) or fixed.
pub fn get_family(f: Family, lambda: Option<Rational>) -> Result<FamilyRecord, CatalogError> {
    if lambda.is_some() && !f.has_lambda() {
        return Err(CatalogError::NoParameter(f));
    }
    if let Some(l) = &lambda {
        if f.excluded_lambda().contains(l) {
            return Err(CatalogError::InadmissibleLambda { family: f, lambda: l.clone() });
        }
    }
    let lambda_zero = lambda.as_ref().is_some_and(Rational::is_zero);
    let mut table = symbolic_table(f);
    let mut aut = aut_family(f, lambda_zero);
    let mut traces: Vec<ExpectedTrace> = expected_trace_coefficients(f)
        .into_iter()
        .map(|(shape, coefficient)| ExpectedTrace { label: shape.label().to_string(), shape, coefficient })
        .collect();
    let regime = match (&lambda, f.has_lambda()) {
        (_, false) => Regime::Fixed,
        (None, true) => {
            if f == Family::L4 || f == Family::L7 {
                table = table.with_constraints(vec![lam()]);
            }
            Regime::Symbolic
        }
        (Some(l), true) => {
            let sigma = lambda_substitution(l);
            table = table.substitute(&sigma);
            aut = specialize_aut(&aut, &sigma);
            for t in &mut traces {
                t.coefficient = t.coefficient.substitute(&sigma);
            }
            Regime::Value(l.clone())
        }
    };
    Ok(FamilyRecord {
        family: f,
        regime,
        table,
        aut,
        diag: diagonal_family(f),
        expected_traces: traces,
        expected_aut_dim: expected_aut_dim(f, lambda_zero),
        expected_ncl: expected_ncl(f),
        expected_ann_r: expected_ann_r(f),
    })
}

/// Every record in symbolic form, plus the λ = 0 regimes of L4 and L7.
pub fn all_records() -> Vec<FamilyRecord> {
    let mut out = Vec::new();
    for f in Family::ALL {
        out.push(get_family(f, None).expect("symbolic records exist"));
        if matches!(f, Family::L4 | Family::L7) {
            out.push(get_family(f, Some(Rational::zero())).expect("λ = 0 is admissible"));
        }
    }
    out
}

/// Records at every sampled λ (and the fixed families once).
pub fn sampled_records() -> Vec<FamilyRecord> {
    let mut out = Vec::new();
    for f in Family::ALL {
        if f.has_lambda() {
            for l in f.lambda_samples() {
                out.push(get_family(f, Some(l)).expect("samples are admissible"));
            }
            if matches!(f, Family::L4 | Family::L7) {
                out.push(get_family(f, Some(Rational::zero())).expect("λ = 0 is admissible"));
            }
        } else {
            out.push(get_family(f, None).expect("fixed family"));
        }
    }
    out
}

pub const CATALOG_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogFile {
    pub version: u32,
    pub lambda_samples: Vec<Rational>,
    pub records: Vec<FamilyRecord>,
}

pub fn catalog_file() -> CatalogFile {
    CatalogFile {
        version: CATALOG_VERSION,
        lambda_samples: LAMBDA_SAMPLES.iter().map(|&(p, q)| Rational::new(p, q)).collect(),
        records: all_records(),
    }
}

/// The serialized catalog shipped with the crate.
pub const CATALOG_JSON: &str = include_str!("../resources/catalog.json");

pub fn load_shipped_catalog() -> Result<CatalogFile, serde_json::Error> {
    serde_json::from_str(CATALOG_JSON)
}

/// Expected value of one trace-table entry for copies r, s.
pub fn expected_trace_value(t: &ExpectedTrace, r: usize, s: usize) -> Poly {
    t.coefficient.mul_ref(&t.shape.monomial(r, s))
}

/// λ values keyed by family for the suites.
pub fn lambda_sample_map() -> BTreeMap<Family, Vec<Rational>> {
    Family::ALL.iter().filter(|f| f.has_lambda()).map(|&f| (f, f.lambda_samples())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_table_rows() {
        let t = symbolic_table(Family::L1);
        assert_eq!(t.product(0, 2), times(c(-2), e(1)));
        assert_eq!(t.product(1, 1), e(1));
        assert_eq!(t.product(1, 2), times(c(-1), e(2)));
        assert_eq!(t.product(2, 1), e(2));
        assert!(t.product(2, 2).iter().all(Poly::is_zero));
    }

    #[test]
    fn l9_table() {
        let t = symbolic_table(Family::L9);
        assert_eq!(t.product(0, 2), plus(e(1), e(2)));
        assert_eq!(t.product(2, 2), e(1));
    }

    #[test]
    fn lambda_admissibility() {
        assert!(matches!(get_family(Family::L2, Some(Rational::zero())), Err(CatalogError::InadmissibleLambda { .. })));
        assert!(matches!(get_family(Family::L1, Some(Rational::one())), Err(CatalogError::NoParameter(_))));
        assert!(get_family(Family::L7, Some(Rational::zero())).is_ok());
        assert_eq!(Family::L2.lambda_samples().len(), 5);
    }

    #[test]
    fn parse_names() {
        assert_eq!("L11".parse::<Family>().unwrap(), Family::L11);
        assert_eq!("l3".parse::<Family>().unwrap(), Family::L3);
        assert!("L12".parse::<Family>().is_err());
        assert!("L0".parse::<Family>().is_err());
    }

    #[test]
    fn shipped_resource_matches_code() {
        let shipped = load_shipped_catalog().expect("resource parses");
        assert_eq!(shipped, catalog_file());
    }

    #[test]
    fn parameter_counts_match_expected_dims() {
        for rec in all_records() {
            assert_eq!(rec.aut.parameter_count(), rec.expected_aut_dim, "{}", rec.label());
        }
    }

    fn ctx(rec: &FamilyRecord) -> crate::exact::PivotContext {
        crate::exact::PivotContext::strict(rec.table.constraints().to_vec())
    }

    #[test]
    fn tables_are_leibniz_and_not_lie() {
        for rec in all_records().iter().chain(&sampled_records()) {
            assert!(rec.table.check_leibniz().holds, "{}", rec.label());
            let leib = rec.table.leib_ideal(&ctx(rec)).unwrap();
            assert!(leib.dim() > 0, "{} is Lie", rec.label());
        }
    }

    #[test]
    fn automorphism_branches_verify() {
        for rec in all_records().iter().chain(&sampled_records()) {
            let check = crate::aut::verify_aut_family(&rec.table, &rec.aut, crate::par::Strategy::Sequential);
            assert!(check.holds, "{}: {:?}", rec.label(), check.witness);
        }
    }

    #[test]
    fn derivation_dims_match_group_dims() {
        for rec in all_records().iter().chain(&sampled_records()) {
            assert_eq!(rec.table.derivation_dim(&ctx(rec)).unwrap(), rec.expected_aut_dim, "{}", rec.label());
        }
    }

    #[test]
    fn trace_table_matches_both_engines() {
        for rec in all_records().iter().chain(&sampled_records()) {
            for t in &rec.expected_traces {
                let w = t.shape.word(1, 2);
                let want = expected_trace_value(t, 1, 2);
                let a = crate::trace::trace_closed_form(&rec.table, &w).unwrap().value;
                let b = crate::trace::trace_direct(&rec.table, &w).unwrap().value;
                assert_eq!(a, want, "{} {}", rec.label(), t.label);
                assert_eq!(b, want, "{} {}", rec.label(), t.label);
            }
        }
    }
}
