//! Decides which of the eleven families a rational three-dimensional table
//! belongs to, from traces of degree ≤ 2 and the derivation dimension
//! (non-nilpotent case) or from ncl, Ann^R and commutativity (nilpotent case).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, Nilpotency, StructureTable};
use crate::catalog::Family;
use crate::exact::{Monomial, PivotContext, Poly, Rational, Var};
use crate::trace::{trace_closed_form, Side, TraceArg, TraceError, TraceWord};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("classification needs dimension 3, got {0}")]
    Dimension(usize),
    #[error("table has symbolic entries; classification needs a rational table")]
    Symbolic,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Classified,
    NotLeibniz,
    Lie,
    Unrecognized,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Classified => 0,
            Outcome::NotLeibniz => 2,
            Outcome::Lie => 3,
            Outcome::Unrecognized => 4,
        }
    }
}

/// Trace data and dimensions the decision is based on.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    /// tr(χ₁χ₀) as coefficients of (x₁, y₁, z₁).
    pub tr_left: Vec<Rational>,
    /// tr(χ₀χ₁) likewise.
    pub tr_right: Vec<Rational>,
    /// tr((χ₀χ₁)χ₁) as a quadratic form.
    pub tr_degree2: Poly,
    /// c with tr(χ₀χ₁) = c·tr(χ₁χ₀), when tr(χ₁χ₀) ≠ 0 and proportional.
    pub right_left_ratio: Option<Rational>,
    /// κ with tr((χ₀χ₁)χ₁) = κ·tr(χ₀χ₁)², when tr(χ₀χ₁) ≠ 0 and proportional.
    pub degree2_ratio: Option<Rational>,
    pub derivation_dim: usize,
    pub leib_dim: usize,
    pub ann_r_dim: usize,
    pub commutative: bool,
    pub zero_trace_test: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub outcome: Outcome,
    pub leibniz: bool,
    pub lie: bool,
    pub nilpotency: Option<Nilpotency>,
    pub nilpotent: Option<bool>,
    pub family: Option<Family>,
    /// Display label, e.g. "L2^λ", "L7^0", "nilpotent: L8".
    pub label: String,
    pub recovered_lambda: Option<Rational>,
    pub notes: Vec<String>,
    pub evidence: Option<Evidence>,
}

impl ClassificationReport {
    fn bare(outcome: Outcome, leibniz: bool, lie: bool, label: &str) -> Self {
        ClassificationReport {
            outcome,
            leibniz,
            lie,
            nilpotency: None,
            nilpotent: None,
            family: None,
            label: label.to_string(),
            recovered_lambda: None,
            notes: Vec::new(),
            evidence: None,
        }
    }
}

fn word(f: Vec<(Side, TraceArg)>) -> TraceWord {
    TraceWord::new(f)
}

fn linear_coeffs(p: &Poly) -> Vec<Rational> {
    (1..=3).map(|i| p.coeff(&Monomial::var(Var::coord(1, i)))).collect()
}

/// c with `p = c·q`, if q ≠ 0 and such c exists.
fn ratio(p: &Poly, q: &Poly) -> Option<Rational> {
    let (m, cq) = q.leading_term()?;
    let c = &p.coeff(m) / cq;
    (q.scale(&c) == *p).then_some(c)
}

/// Runs the classification pipeline on a parameter-free table.
pub fn classify(t: &StructureTable) -> Result<ClassificationReport, ClassifyError> {
    if t.dim() != 3 {
        return Err(ClassifyError::Dimension(t.dim()));
    }
    if !t.is_parameter_free() {
        return Err(ClassifyError::Symbolic);
    }
    if !t.check_leibniz().holds {
        return Ok(ClassificationReport::bare(Outcome::NotLeibniz, false, false, "not a Leibniz algebra"));
    }
    let ctx = PivotContext::strict(Vec::new());
    let leib_dim = t.leib_ideal(&ctx)?.dim();
    if leib_dim == 0 {
        return Ok(ClassificationReport::bare(Outcome::Lie, true, false, "Lie algebra, out of scope").with_lie());
    }

    let tr_l = trace_closed_form(t, &word(vec![(Side::L, TraceArg::Single(1))]))?.value;
    let tr_r = trace_closed_form(t, &word(vec![(Side::R, TraceArg::Single(1))]))?.value;
    let q = trace_closed_form(t, &word(vec![(Side::R, TraceArg::Single(1)), (Side::R, TraceArg::Single(1))]))?.value;
    let zero_trace_test = tr_r.is_zero() && q.is_zero();
    let nilpotency = t.nilpotency_class(t.default_nilpotency_cap(), &ctx)?;
    let mut ev = Evidence {
        tr_left: linear_coeffs(&tr_l),
        tr_right: linear_coeffs(&tr_r),
        tr_degree2: q.clone(),
        right_left_ratio: ratio(&tr_r, &tr_l),
        degree2_ratio: ratio(&q, &tr_r.pow(2)),
        derivation_dim: t.derivation_dim(&ctx)?,
        leib_dim,
        ann_r_dim: t.right_annihilator(&ctx)?.dim(),
        commutative: t.is_commutative(),
        zero_trace_test,
    };
    if tr_l.is_zero() {
        ev.right_left_ratio = None;
    }
    let mut rep = ClassificationReport::bare(Outcome::Unrecognized, true, false, "unrecognized");
    rep.nilpotency = Some(nilpotency);
    rep.nilpotent = Some(nilpotency.is_nilpotent());

    if zero_trace_test != nilpotency.is_nilpotent() {
        rep.notes.push(format!(
            "zero-trace test ({zero_trace_test}) disagrees with the nilpotency chain ({nilpotency:?})"
        ));
        rep.evidence = Some(ev);
        return Ok(rep);
    }
    let (family, lambda, note) =
        if nilpotency.is_nilpotent() { match_nilpotent(nilpotency, &ev) } else { match_separated(&tr_l, &tr_r, &ev) };
    if let Some(n) = note {
        rep.notes.push(n);
    }
    if let Some(f) = family {
        rep.outcome = Outcome::Classified;
        rep.family = Some(f);
        let base = match (&lambda, f) {
            (Some(l), _) if l.is_integer() => format!("{f}^{l}"),
            (Some(l), _) => format!("{f}^({l})"),
            (None, Family::L2 | Family::L4 | Family::L7) => format!("{f}^λ"),
            (None, _) => f.to_string(),
        };
        rep.label = if f.is_nilpotent() { format!("nilpotent: {base}") } else { base };
        rep.recovered_lambda = lambda;
    }
    rep.evidence = Some(ev);
    Ok(rep)
}

impl ClassificationReport {
    fn with_lie(mut self) -> Self {
        self.lie = true;
        self
    }
}

type Match = (Option<Family>, Option<Rational>, Option<String>);

/// Nilpotent case: ncl 4 → L8; ncl 3 commutative → L5 (Ann^R 1) or L11
/// (Ann^R 2); ncl 3 non-commutative → L4, with λ = 0 exactly when Ann^R = 2.
fn match_nilpotent(nil: Nilpotency, ev: &Evidence) -> Match {
    match (nil.class(), ev.commutative, ev.ann_r_dim) {
        (Some(4), _, _) => (Some(Family::L8), None, None),
        (Some(3), true, 1) => (Some(Family::L5), None, None),
        (Some(3), true, 2) => (Some(Family::L11), None, None),
        (Some(3), false, 2) => (Some(Family::L4), Some(Rational::zero()), None),
        (Some(3), false, 1) => (Some(Family::L4), None, Some("λ undetermined (λ ≠ 0)".to_string())),
        _ => (None, None, Some("no nilpotent family matches ncl / Ann^R / commutativity".to_string())),
    }
}

/// Non-nilpotent case, one row per family:
///
/// | tr(χ₁χ₀) | d | further condition                    | family     |
/// |----------|---|--------------------------------------|------------|
/// | ≠ 0      | 2 |                                      | L1         |
/// | ≠ 0      | 3 | tr(χ₀χ₁) = −tr(χ₁χ₀)                 | L3         |
/// | ≠ 0      | 3 | tr(χ₀χ₁) = (λ−1)tr(χ₁χ₀), λ ≠ 0      | L2^λ       |
/// | = 0      | 2 | tr(χ₀χ₁) = 0                         | L6         |
/// | = 0      | 2 | tr((χ₀χ₁)χ₁) = tr(χ₀χ₁)²             | L9         |
/// | = 0      | 2 | tr((χ₀χ₁)χ₁) = (1+2λ)tr(χ₀χ₁)², λ≠0  | L7^λ       |
/// | = 0      | 3 |                                      | L7^0       |
/// | = 0      | 4 |                                      | L10        |
fn match_separated(tr_l: &Poly, tr_r: &Poly, ev: &Evidence) -> Match {
    let d = ev.derivation_dim;
    let none = |why: &str| (None, None, Some(why.to_string()));
    if !tr_l.is_zero() {
        return match d {
            2 => (Some(Family::L1), None, None),
            3 => match &ev.right_left_ratio {
                Some(c) if *c == Rational::from_int(-1) => (Some(Family::L3), None, None),
                Some(c) => (Some(Family::L2), Some(c + &Rational::one()), None),
                None => none("tr(χ₀χ₁) is not proportional to tr(χ₁χ₀)"),
            },
            _ => none("tr(χ₁χ₀) ≠ 0 but d ∉ {2, 3}"),
        };
    }
    match d {
        4 => (Some(Family::L10), None, None),
        3 => (Some(Family::L7), Some(Rational::zero()), None),
        2 if tr_r.is_zero() => (Some(Family::L6), None, None),
        2 => match &ev.degree2_ratio {
            Some(k) if k.is_one() => (Some(Family::L9), None, None),
            Some(k) => (Some(Family::L7), Some(&(k - &Rational::one()) / &Rational::from_int(2)), None),
            None => none("tr((χ₀χ₁)χ₁) is not proportional to tr(χ₀χ₁)²"),
        },
        _ => none("tr(χ₁χ₀) = 0 but d ∉ {2, 3, 4}"),
    }
}

/// A random invertible rational matrix with small entries.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Rational>> {
    loop {
        let p: Vec<Vec<Rational>> = (0..n)
            .map(|_| (0..n).map(|_| Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect())
            .collect();
        if crate::exact::linalg::rational_inverse(&p).is_some() {
            return p;
        }
    }
}

/// The table rewritten in a random rational basis.
pub fn random_conjugate<R: Rng>(t: &StructureTable, rng: &mut R) -> StructureTable {
    let p = random_invertible(rng, t.dim());
    t.change_basis(&p).expect("invertible by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_family;
    use rand::SeedableRng;

    fn table(f: Family, l: Option<(i64, i64)>) -> StructureTable {
        get_family(f, l.map(|(p, q)| Rational::new(p, q))).unwrap().table
    }

    #[test]
    fn l1_direct() {
        let r = classify(&table(Family::L1, None)).unwrap();
        assert_eq!(r.family, Some(Family::L1));
        assert_eq!(r.outcome.exit_code(), 0);
    }

    #[test]
    fn l2_conjugated() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let t = random_conjugate(&table(Family::L2, Some((3, 1))), &mut rng);
        let r = classify(&t).unwrap();
        assert_eq!(r.family, Some(Family::L2));
        assert_eq!(r.recovered_lambda, Some(Rational::from_int(3)));
    }

    #[test]
    fn l7_lambda_two() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let t = random_conjugate(&table(Family::L7, Some((2, 1))), &mut rng);
        let r = classify(&t).unwrap();
        assert_eq!((r.family, r.recovered_lambda), (Some(Family::L7), Some(Rational::from_int(2))));
        assert_eq!(r.evidence.unwrap().degree2_ratio, Some(Rational::from_int(5)));
    }

    #[test]
    fn nilpotent_families() {
        let r = classify(&table(Family::L8, None)).unwrap();
        assert_eq!(r.family, Some(Family::L8));
        assert_eq!(r.nilpotency.unwrap().class(), Some(4));
        assert_eq!(classify(&table(Family::L5, None)).unwrap().family, Some(Family::L5));
        assert_eq!(classify(&table(Family::L11, None)).unwrap().family, Some(Family::L11));
        let l4 = classify(&table(Family::L4, Some((2, 1)))).unwrap();
        assert_eq!((l4.family, l4.recovered_lambda.clone()), (Some(Family::L4), None));
        assert!(l4.notes.iter().any(|n| n.contains("undetermined")));
        let l40 = classify(&table(Family::L4, Some((0, 1)))).unwrap();
        assert_eq!(l40.recovered_lambda, Some(Rational::zero()));
    }

    #[test]
    fn out_of_scope_inputs() {
        // sl2-like Lie bracket: [e1,e2]=e3 antisymmetric, Jacobi holds
        let e = |i| crate::algebra::basis_element(i, 3);
        let neg = |v: Vec<Poly>| v.into_iter().map(|p| -p).collect::<Vec<_>>();
        let lie = StructureTable::from_products(3, vec![(0, 1, e(2)), (1, 0, neg(e(2)))]);
        assert_eq!(classify(&lie).unwrap().outcome, Outcome::Lie);
        let bad = StructureTable::from_products(3, vec![(0, 0, e(1)), (1, 1, e(0))]);
        assert_eq!(classify(&bad).unwrap().outcome.exit_code(), 2);
        assert!(matches!(classify(&StructureTable::zero(2)), Err(ClassifyError::Dimension(2))));
        assert!(matches!(classify(&table(Family::L2, None)), Err(ClassifyError::Symbolic)));
    }
}
