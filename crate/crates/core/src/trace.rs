//! Operator traces tr(h) of words h = P¹ ∘ … ∘ Pᵏ (χ₀), computed two
//! independent ways: by building the operator on generic elements and taking
//! its trace, and by the closed-form sum over basis-index tuples.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{basis_element, generic_element, AlgebraError, Element, StructureTable};
use crate::exact::linalg::{self, PivotContext, PolyMatrix};
use crate::exact::{LinalgError, Poly};
use crate::par::{self, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    L,
    R,
}

/// A degree-1 argument χ_r or a degree-2 argument χ_r χ_s (copies 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TraceArg {
    Single(usize),
    Pair(usize, usize),
}

impl TraceArg {
    fn degree(&self) -> u32 {
        match self {
            TraceArg::Single(_) => 1,
            TraceArg::Pair(..) => 2,
        }
    }

    fn copies(&self) -> Vec<usize> {
        match *self {
            TraceArg::Single(r) => vec![r],
            TraceArg::Pair(r, s) => vec![r, s],
        }
    }
}

/// Factors are stored outermost first: tr((χ₀χ_s)χ_r) is `[(R, r), (R, s)]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraceWord {
    pub factors: Vec<(Side, TraceArg)>,
}

impl TraceWord {
    pub fn new(factors: Vec<(Side, TraceArg)>) -> Self {
        TraceWord { factors }
    }

    pub fn identity() -> Self {
        TraceWord::default()
    }

    pub fn single(side: Side, r: usize) -> Self {
        TraceWord { factors: vec![(side, TraceArg::Single(r))] }
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|(_, a)| a.degree()).sum()
    }

    pub fn max_copy(&self) -> usize {
        self.factors.iter().flat_map(|(_, a)| a.copies()).max().unwrap_or(0)
    }

    pub fn multidegree(&self, m: usize) -> Vec<u32> {
        let mut d = vec![0; m];
        for (_, a) in &self.factors {
            for r in a.copies() {
                d[r - 1] += 1;
            }
        }
        d
    }

    /// Reads the word as the nonassociative monomial it denotes, e.g. `((x0 x2) x1)`.
    pub fn expression(&self) -> String {
        let mut s = "χ0".to_string();
        for (side, arg) in self.factors.iter().rev() {
            let a = match arg {
                TraceArg::Single(r) => format!("χ{r}"),
                TraceArg::Pair(r, t) => format!("(χ{r}χ{t})"),
            };
            s = match side {
                Side::L => format!("{a}{}", wrap(&s)),
                Side::R => format!("{}{a}", wrap(&s)),
            };
        }
        format!("tr({s})")
    }
}

fn wrap(s: &str) -> String {
    if s == "χ0" {
        s.to_string()
    } else {
        format!("({s})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("malformed trace word `{0}`")]
    Parse(String),
    #[error("copy index {0} out of range")]
    Copy(usize),
    #[error("dimension must be 3, got {0}")]
    NotThreeDim(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(side, arg)| {
                let s = if *side == Side::L { "L" } else { "R" };
                match arg {
                    TraceArg::Single(r) => format!("{s}{r}"),
                    TraceArg::Pair(r, t) => format!("{s}({r}*{t})"),
                }
            })
            .collect();
        f.write_str(&parts.join("."))
    }
}

/// Grammar: `id` or factors joined by `.`; a factor is `L` or `R` followed by
/// a copy index `r` or a pair `(r*s)`.
impl FromStr for TraceWord {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self, TraceError> {
        let s = s.trim();
        let bad = || TraceError::Parse(s.to_string());
        if s.is_empty() || s == "id" {
            return Ok(TraceWord::identity());
        }
        let mut factors = Vec::new();
        for part in s.split('.') {
            let part = part.trim();
            let side = match part.chars().next() {
                Some('L') | Some('l') => Side::L,
                Some('R') | Some('r') => Side::R,
                _ => return Err(bad()),
            };
            let rest = part[1..].trim();
            let copy = |t: &str| -> Result<usize, TraceError> {
                let r: usize = t.trim().parse().map_err(|_| bad())?;
                if r == 0 {
                    return Err(TraceError::Copy(0));
                }
                Ok(r)
            };
            let arg = if let Some(inner) = rest.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
                let (a, b) = inner.split_once('*').ok_or_else(bad)?;
                TraceArg::Pair(copy(a)?, copy(b)?)
            } else {
                TraceArg::Single(copy(rest)?)
            };
            factors.push((side, arg));
        }
        Ok(TraceWord { factors })
    }
}

impl Serialize for TraceWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TraceWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceValue {
    pub word: TraceWord,
    pub m: usize,
    pub value: Poly,
}

fn copies_of(w: &TraceWord) -> usize {
    w.max_copy().max(1)
}

/// Closed form: Σ over index tuples of tr(M_{P¹}^{(i₁)} ⋯ M_{Pᵏ}^{(iₖ)}) times
/// the matching coordinate monomial; pair arguments use the double matrices.
pub fn trace_closed_form(t: &StructureTable, w: &TraceWord) -> Result<TraceValue, TraceError> {
    let n = t.dim();
    if w.factors.is_empty() {
        return Ok(TraceValue { word: w.clone(), m: copies_of(w), value: Poly::int(n as i64) });
    }
    // per factor: the nonzero (matrix, weight) terms
    let mut choices: Vec<Vec<(PolyMatrix, Poly)>> = Vec::with_capacity(w.factors.len());
    for (side, arg) in &w.factors {
        let mut opts = Vec::new();
        match *arg {
            TraceArg::Single(r) => {
                for i in 0..n {
                    let (ml, mr) = t.mult_matrices(i)?;
                    let mat = if *side == Side::L { ml } else { mr };
                    if !mat.is_zero() {
                        opts.push((mat, Poly::coord(r, i + 1)));
                    }
                }
            }
            TraceArg::Pair(r, s) => {
                for i in 0..n {
                    for i2 in 0..n {
                        let (ml, mr) = t.double_mult_matrices(i, i2)?;
                        let mat = if *side == Side::L { ml } else { mr };
                        if !mat.is_zero() {
                            opts.push((mat, &Poly::coord(r, i + 1) * &Poly::coord(s, i2 + 1)));
                        }
                    }
                }
            }
        }
        choices.push(opts);
    }
    let mut acc = Poly::zero();
    let mut stack: Vec<(usize, PolyMatrix, Poly)> = vec![(0, PolyMatrix::identity(n), Poly::one())];
    while let Some((depth, mat, weight)) = stack.pop() {
        if depth == choices.len() {
            let tr = mat.trace();
            if !tr.is_zero() {
                acc = acc.add_ref(&tr.mul_ref(&weight));
            }
            continue;
        }
        for (m, wgt) in &choices[depth] {
            let prod = mat.mul(m);
            if !prod.is_zero() {
                stack.push((depth + 1, prod, weight.mul_ref(wgt)));
            }
        }
    }
    Ok(TraceValue { word: w.clone(), m: copies_of(w), value: acc })
}

fn argument(t: &StructureTable, arg: &TraceArg) -> Element {
    let n = t.dim();
    match *arg {
        TraceArg::Single(r) => generic_element(r, n),
        TraceArg::Pair(r, s) => t.mul_unchecked(&generic_element(r, n), &generic_element(s, n)),
    }
}

/// Builds the operator b ↦ h(b, X₁, …, X_m) column by column and takes its trace.
pub fn trace_direct(t: &StructureTable, w: &TraceWord) -> Result<TraceValue, TraceError> {
    let n = t.dim();
    let args: Vec<Element> = w.factors.iter().map(|(_, a)| argument(t, a)).collect();
    let mut value = Poly::zero();
    for i in 0..n {
        let mut b = basis_element(i, n);
        for ((side, _), a) in w.factors.iter().zip(&args).rev() {
            b = match side {
                Side::L => t.mul_unchecked(a, &b),
                Side::R => t.mul_unchecked(&b, a),
            };
        }
        value = value.add_ref(&b[i]);
    }
    Ok(TraceValue { word: w.clone(), m: copies_of(w), value })
}

/// The three-dimensional linear traces tr(χ_rχ₀) (left) and tr(χ₀χ_r)
/// (right), read off the diagonal pattern of the table.
pub fn trace_linear_n3(t: &StructureTable, side: Side, r: usize) -> Result<TraceValue, TraceError> {
    if t.dim() != 3 {
        return Err(TraceError::NotThreeDim(t.dim()));
    }
    let mut value = Poly::zero();
    for i in 0..3 {
        // left: row e_i of the table, j-th product's j-th coordinate;
        // right: column e_i, j-th product's j-th coordinate
        let coeff: Poly = (0..3)
            .map(|j| match side {
                Side::L => t.get(i, j, j).clone(),
                Side::R => t.get(j, i, j).clone(),
            })
            .sum();
        if !coeff.is_zero() {
            value = value.add_ref(&coeff.mul_ref(&Poly::coord(r, i + 1)));
        }
    }
    Ok(TraceValue { word: TraceWord::single(side, r), m: r, value })
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All multidegrees in ℕ^m with total at most `max_total`, by increasing total.
pub fn multidegrees_up_to(max_total: u32, m: usize) -> Vec<Vec<u32>> {
    (0..=max_total).flat_map(|t| compositions(t, m)).collect()
}

/// All nonempty words over {L, R} × {χ_r, χ_rχ_s} of total degree ≤ `max_total`.
pub fn enumerate_trace_words(max_total: u32, m: usize) -> Vec<TraceWord> {
    let mut args: Vec<TraceArg> = (1..=m).map(TraceArg::Single).collect();
    for r in 1..=m {
        for s in 1..=m {
            args.push(TraceArg::Pair(r, s));
        }
    }
    let mut out = Vec::new();
    let mut frontier: Vec<(Vec<(Side, TraceArg)>, u32)> = vec![(Vec::new(), 0)];
    while let Some((prefix, deg)) = frontier.pop() {
        for side in [Side::L, Side::R] {
            for a in &args {
                let d = deg + a.degree();
                if d > max_total {
                    continue;
                }
                let mut f = prefix.clone();
                f.push((side, *a));
                out.push(TraceWord::new(f.clone()));
                frontier.push((f, d));
            }
        }
    }
    out.sort_by(|a, b| (a.total_degree(), a.factors.len(), &a.factors).cmp(&(b.total_degree(), b.factors.len(), &b.factors)));
    out.dedup();
    out
}

pub fn trace_many(t: &StructureTable, words: &[TraceWord], strategy: Strategy) -> Result<Vec<TraceValue>, TraceError> {
    par::try_map(strategy, words, |w| trace_closed_form(t, w))
}

/// Per multidegree, a basis of the degree component of the subalgebra
/// generated by 1 and the traces of all words up to the bound.
pub fn trace_subalgebra_span(
    t: &StructureTable,
    max_total: u32,
    m: usize,
    ctx: &PivotContext,
    strategy: Strategy,
) -> Result<BTreeMap<Vec<u32>, Vec<Poly>>, TraceError> {
    let words = enumerate_trace_words(max_total, m);
    let values = trace_many(t, &words, strategy)?;
    let degrees = multidegrees_up_to(max_total, m);
    let mut by_degree: BTreeMap<Vec<u32>, Vec<Poly>> = BTreeMap::new();
    for (w, v) in words.iter().zip(values) {
        if !v.value.is_zero() {
            by_degree.entry(w.multidegree(m)).or_default().push(v.value);
        }
    }
    let mut generators: BTreeMap<Vec<u32>, Vec<Poly>> = BTreeMap::new();
    for d in &degrees {
        let g = by_degree.get(d).map(|v| linalg::poly_span_basis(v, ctx)).transpose()?.unwrap_or_default();
        generators.insert(d.clone(), g);
    }
    let mut span: BTreeMap<Vec<u32>, Vec<Poly>> = BTreeMap::new();
    for d in &degrees {
        if d.iter().all(|&x| x == 0) {
            span.insert(d.clone(), vec![Poly::one()]);
            continue;
        }
        let mut cands: Vec<Poly> = generators[d].clone();
        for (e, gens) in &generators {
            let leq = e.iter().zip(d).all(|(a, b)| a <= b);
            if !leq || e == d || e.iter().all(|&x| x == 0) || gens.is_empty() {
                continue;
            }
            let rest: Vec<u32> = d.iter().zip(e).map(|(a, b)| a - b).collect();
            for g in gens {
                for h in &span[&rest] {
                    cands.push(g.mul_ref(h));
                }
            }
        }
        span.insert(d.clone(), linalg::poly_span_basis(&cands, ctx)?);
    }
    Ok(span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn e(i: usize) -> Element {
        basis_element(i, 3)
    }
    fn scaled(i: usize, c: i64) -> Element {
        e(i).into_iter().map(|p| p.scale(&Rational::from_int(c))).collect()
    }
    fn l1() -> StructureTable {
        StructureTable::from_products(3, [(0, 2, scaled(0, -2)), (1, 1, e(0)), (1, 2, scaled(1, -1)), (2, 1, e(1))])
    }
    fn z(r: usize) -> Poly {
        Poly::coord(r, 3)
    }

    #[test]
    fn word_syntax() {
        let w: TraceWord = "R1.R2".parse().unwrap();
        assert_eq!(w.factors, vec![(Side::R, TraceArg::Single(1)), (Side::R, TraceArg::Single(2))]);
        assert_eq!(w.to_string(), "R1.R2");
        assert_eq!(w.expression(), "tr((χ0χ2)χ1)");
        let p: TraceWord = "L(1*2)".parse().unwrap();
        assert_eq!(p.factors, vec![(Side::L, TraceArg::Pair(1, 2))]);
        assert_eq!(p.expression(), "tr((χ1χ2)χ0)");
        assert!("Q1".parse::<TraceWord>().is_err());
        assert!("R0".parse::<TraceWord>().is_err());
    }

    #[test]
    fn l1_traces() {
        let t = l1();
        let w = TraceWord::single(Side::R, 1);
        assert_eq!(trace_closed_form(&t, &w).unwrap().value, z(1).scale(&Rational::from_int(-3)));
        let w2: TraceWord = "R1.R2".parse().unwrap();
        let five = (&z(1) * &z(2)).scale(&Rational::from_int(5));
        assert_eq!(trace_closed_form(&t, &w2).unwrap().value, five);
        assert_eq!(trace_direct(&t, &w2).unwrap().value, five);
        assert_eq!(trace_direct(&t, &TraceWord::identity()).unwrap().value, Poly::int(3));
    }

    #[test]
    fn word_counts() {
        assert_eq!(enumerate_trace_words(1, 1).len(), 2);
        assert_eq!(enumerate_trace_words(2, 1).len(), 8);
        let n11 = enumerate_trace_words(2, 2).into_iter().filter(|w| w.multidegree(2) == vec![1, 1]).count();
        assert_eq!(n11, 12);
    }

    #[test]
    fn generic_engines_agree_degree_two() {
        let t = StructureTable::generic(3);
        for w in enumerate_trace_words(2, 2) {
            let a = trace_closed_form(&t, &w).unwrap().value;
            let b = trace_direct(&t, &w).unwrap().value;
            assert_eq!(a, b, "{w}");
            assert!(a.is_homogeneous_of(&w.multidegree(2)));
        }
        for side in [Side::L, Side::R] {
            let lin = trace_linear_n3(&t, side, 1).unwrap().value;
            assert_eq!(lin, trace_closed_form(&t, &TraceWord::single(side, 1)).unwrap().value);
        }
    }

    #[test]
    fn multidegree_listing() {
        let ds = multidegrees_up_to(2, 2);
        assert_eq!(ds.len(), 6);
        assert_eq!(ds[0], vec![0, 0]);
    }
}
