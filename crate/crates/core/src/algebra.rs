//! Finite-dimensional algebras given by structure constants.
//!
//! Indices are 0-based in the API (`e_0..e_{n-1}`); displays and JSON
//! keep the natural 1-based reading only where noted.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::linalg::{self, PivotContext, PolyMatrix};
use crate::exact::{LinalgError, Param, Poly, Rational, RewriteSystem, Substitution, Var};

/// Coordinates of an algebra element in the standard basis.
pub type Element = Vec<Poly>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Structure constants `e_i e_j = Σ_l M[i][j][l] e_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTable {
    dim: usize,
    entries: Vec<Poly>,
    constraints: Vec<Poly>,
}

impl StructureTable {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        StructureTable { dim, entries: vec![Poly::zero(); dim * dim * dim], constraints: Vec::new() }
    }

    /// Builds a table from its nonzero products `(i, j, e_i e_j)`.
    pub fn from_products<I>(dim: usize, products: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Element)>,
    {
        let mut t = Self::zero(dim);
        for (i, j, v) in products {
            assert_eq!(v.len(), dim);
            for (l, p) in v.into_iter().enumerate() {
                t.set(i, j, l, p);
            }
        }
        t
    }

    /// The table with every constant M_{ijl} an independent parameter.
    pub fn generic(dim: usize) -> Self {
        let mut t = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                for l in 0..dim {
                    let p = Param::Struct { i: i as u8 + 1, j: j as u8 + 1, l: l as u8 + 1 };
                    t.set(i, j, l, Poly::param(p));
                }
            }
        }
        t
    }

    pub fn with_constraints(mut self, constraints: Vec<Poly>) -> Self {
        self.constraints = constraints;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Poly] {
        &self.constraints
    }

    fn idx(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.dim + j) * self.dim + l
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> &Poly {
        &self.entries[self.idx(i, j, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, l: usize, p: Poly) {
        let k = self.idx(i, j, l);
        self.entries[k] = p;
    }

    /// `e_i e_j` as a coordinate vector.
    pub fn product(&self, i: usize, j: usize) -> Element {
        (0..self.dim).map(|l| self.get(i, j, l).clone()).collect()
    }

    pub fn is_parameter_free(&self) -> bool {
        self.entries.iter().all(Poly::is_constant)
    }

    pub fn params(&self) -> Vec<Param> {
        let mut out: Vec<Param> = self.entries.iter().flat_map(|p| p.vars()).filter_map(|v| v.param()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn map_entries<F: Fn(&Poly) -> Poly>(&self, f: F) -> Self {
        StructureTable {
            dim: self.dim,
            entries: self.entries.iter().map(&f).collect(),
            constraints: self.constraints.iter().map(&f).filter(|p| !p.is_constant()).collect(),
        }
    }

    pub fn substitute(&self, sigma: &Substitution) -> Self {
        self.map_entries(|p| p.substitute(sigma))
    }

    /// Fixes parameters to rational values.
    pub fn specialize(&self, values: &BTreeMap<Param, Rational>) -> Self {
        let sigma: Substitution = values.iter().map(|(p, r)| (Var::Param(*p), Poly::constant(r.clone()))).collect();
        self.substitute(&sigma)
    }

    pub fn mul(&self, a: &[Poly], b: &[Poly]) -> Result<Element, AlgebraError> {
        for v in [a, b] {
            if v.len() != self.dim {
                return Err(AlgebraError::DimensionMismatch { expected: self.dim, got: v.len() });
            }
        }
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &[Poly], b: &[Poly]) -> Element {
        let n = self.dim;
        let mut out = vec![Poly::zero(); n];
        for (i, ai) in a.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                let c = ai.mul_ref(bj);
                for (l, slot) in out.iter_mut().enumerate() {
                    let m = self.get(i, j, l);
                    if !m.is_zero() {
                        *slot = slot.add_ref(&c.mul_ref(m));
                    }
                }
            }
        }
        out
    }

    fn check_index(&self, i: usize) -> Result<(), AlgebraError> {
        if i < self.dim {
            Ok(())
        } else {
            Err(AlgebraError::IndexOutOfRange { index: i, dim: self.dim })
        }
    }

    /// Left and right multiplication matrices by `e_i`: entry (l, j) is
    /// M_{ijl} for the left one and M_{jil} for the right one.
    pub fn mult_matrices(&self, i: usize) -> Result<(PolyMatrix, PolyMatrix), AlgebraError> {
        self.check_index(i)?;
        let n = self.dim;
        let mut left = PolyMatrix::zeros(n, n);
        let mut right = PolyMatrix::zeros(n, n);
        for l in 0..n {
            for j in 0..n {
                left.set(l, j, self.get(i, j, l).clone());
                right.set(l, j, self.get(j, i, l).clone());
            }
        }
        Ok((left, right))
    }

    /// Multiplication matrices by `e_i e_{i2}`: entries Σ_t M_{i i2 t} M_{tjl}
    /// and Σ_t M_{i i2 t} M_{jtl}.
    pub fn double_mult_matrices(&self, i: usize, i2: usize) -> Result<(PolyMatrix, PolyMatrix), AlgebraError> {
        self.check_index(i)?;
        self.check_index(i2)?;
        let n = self.dim;
        let mut left = PolyMatrix::zeros(n, n);
        let mut right = PolyMatrix::zeros(n, n);
        for t in 0..n {
            let c = self.get(i, i2, t);
            if c.is_zero() {
                continue;
            }
            for l in 0..n {
                for j in 0..n {
                    let lv = self.get(t, j, l);
                    if !lv.is_zero() {
                        left.set(l, j, left.get(l, j).add_ref(&c.mul_ref(lv)));
                    }
                    let rv = self.get(j, t, l);
                    if !rv.is_zero() {
                        right.set(l, j, right.get(l, j).add_ref(&c.mul_ref(rv)));
                    }
                }
            }
        }
        Ok((left, right))
    }

    pub fn check_leibniz(&self) -> LeibnizCheck {
        self.check_leibniz_mod(&RewriteSystem::new())
    }

    /// `(e_i e_j) e_k − (e_i e_k) e_j − e_i (e_j e_k)` for all triples, reduced by `rw`.
    pub fn check_leibniz_mod(&self, rw: &RewriteSystem) -> LeibnizCheck {
        let n = self.dim;
        let basis: Vec<Element> = (0..n).map(|i| basis_element(i, n)).collect();
        for i in 0..n {
            for j in 0..n {
                let ij = self.product(i, j);
                for k in 0..n {
                    let lhs = self.mul_unchecked(&ij, &basis[k]);
                    let ik_j = self.mul_unchecked(&self.product(i, k), &basis[j]);
                    let i_jk = self.mul_unchecked(&basis[i], &self.product(j, k));
                    let residual: Element = (0..n)
                        .map(|l| rw.normal_form(&lhs[l].sub_ref(&ik_j[l]).sub_ref(&i_jk[l])))
                        .collect();
                    if residual.iter().any(|p| !p.is_zero()) {
                        return LeibnizCheck { holds: false, witness: Some(LeibnizWitness { i, j, k, residual }) };
                    }
                }
            }
        }
        LeibnizCheck { holds: true, witness: None }
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.product(i, j) == self.product(j, i)))
    }

    /// True when every square vanishes and the table is antisymmetric.
    pub fn is_anticommutative(&self) -> bool {
        (0..self.dim).all(|i| {
            self.product(i, i).iter().all(Poly::is_zero)
                && (0..self.dim).all(|j| self.product(i, j).iter().zip(self.product(j, i)).all(|(a, b)| (a + &b).is_zero()))
        })
    }

    /// Span of all squares: generated by M_ii and M_ij + M_ji.
    pub fn leib_ideal(&self, ctx: &PivotContext) -> Result<Subspace, AlgebraError> {
        let n = self.dim;
        let mut m = PolyMatrix::with_cols(n);
        for i in 0..n {
            m.push_row(self.product(i, i));
            for j in i + 1..n {
                let v = self.product(i, j).iter().zip(self.product(j, i)).map(|(a, b)| a + &b).collect();
                m.push_row(v);
            }
        }
        Ok(Subspace { ambient: n, basis: linalg::row_basis(&m, ctx)? })
    }

    /// `{a : b a = 0 for all b}`.
    pub fn right_annihilator(&self, ctx: &PivotContext) -> Result<Subspace, AlgebraError> {
        let n = self.dim;
        let mut m = PolyMatrix::with_cols(n);
        for i in 0..n {
            for l in 0..n {
                m.push_row((0..n).map(|j| self.get(i, j, l).clone()).collect());
            }
        }
        Ok(Subspace { ambient: n, basis: linalg::nullspace(&m, ctx)? })
    }

    fn span_products(&self, a: &Subspace, b: &Subspace) -> Vec<Element> {
        let mut out = Vec::new();
        for u in &a.basis {
            for v in &b.basis {
                let w = self.mul_unchecked(u, v);
                if w.iter().any(|p| !p.is_zero()) {
                    out.push(w);
                }
            }
        }
        out
    }

    /// Walks the chain V₁ = L, V_k = Σ_{a+b=k} V_a V_b until it vanishes,
    /// stalls at a nonzero space, or `cap` is reached.
    ///
    /// The chain is descending, and for right Leibniz algebras V_{k+1} =
    /// V_k·L, so a single stall means it is stationary from then on.
    pub fn nilpotency_class(&self, cap: usize, ctx: &PivotContext) -> Result<Nilpotency, AlgebraError> {
        let n = self.dim;
        let mut chain: Vec<Subspace> = vec![Subspace::full(n)];
        for k in 2..=cap.max(1) {
            let mut m = PolyMatrix::with_cols(n);
            for a in 1..k {
                let b = k - a;
                for w in self.span_products(&chain[a - 1], &chain[b - 1]) {
                    m.push_row(w);
                }
            }
            let next = Subspace { ambient: n, basis: linalg::row_basis(&m, ctx)? };
            if next.dim() == 0 {
                return Ok(Nilpotency::Nilpotent { class: k });
            }
            if next.dim() == chain[k - 2].dim() {
                return Ok(Nilpotency::NotNilpotent { stable_dim: next.dim(), stalled_at: k, at_cap: k == cap });
            }
            chain.push(next);
        }
        let last = chain.last().map_or(n, Subspace::dim);
        Ok(Nilpotency::CapReached { cap, dim: last })
    }

    /// Default search bound n + 2.
    pub fn default_nilpotency_cap(&self) -> usize {
        self.dim + 2
    }

    /// The linear system for derivations: unknown D_{pq} (coefficient of e_p
    /// in D(e_q)) sits in column p·n + q; one row per (i, j, l).
    pub fn derivation_system(&self) -> PolyMatrix {
        let n = self.dim;
        let mut m = PolyMatrix::with_cols(n * n);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let mut row = vec![Poly::zero(); n * n];
                    // D(e_i e_j)_l = Σ_t M_ijt D_lt
                    for t in 0..n {
                        let c = self.get(i, j, t);
                        if !c.is_zero() {
                            row[l * n + t] = row[l * n + t].add_ref(c);
                        }
                    }
                    // − (D(e_i) e_j)_l − (e_i D(e_j))_l
                    for p in 0..n {
                        let c = self.get(p, j, l);
                        if !c.is_zero() {
                            row[p * n + i] = row[p * n + i].sub_ref(c);
                        }
                        let c = self.get(i, p, l);
                        if !c.is_zero() {
                            row[p * n + j] = row[p * n + j].sub_ref(c);
                        }
                    }
                    if row.iter().any(|p| !p.is_zero()) {
                        m.push_row(row);
                    }
                }
            }
        }
        m
    }

    pub fn derivation_dim(&self, ctx: &PivotContext) -> Result<usize, AlgebraError> {
        let n = self.dim;
        Ok(n * n - linalg::rank(&self.derivation_system(), ctx)?)
    }

    /// The table in the basis v_a = Σ_i P[i][a] e_i (columns of `p` are the
    /// new basis vectors). Returns `None` when `p` is singular.
    pub fn change_basis(&self, p: &[Vec<Rational>]) -> Option<StructureTable> {
        let n = self.dim;
        assert_eq!(p.len(), n);
        let inv = linalg::rational_inverse(p)?;
        let col = |a: usize| -> Element { (0..n).map(|i| Poly::constant(p[i][a].clone())).collect() };
        let mut out = StructureTable::zero(n);
        out.constraints = self.constraints.clone();
        for a in 0..n {
            for b in 0..n {
                let w = self.mul_unchecked(&col(a), &col(b));
                for (l, row) in inv.iter().enumerate() {
                    let v: Poly = row.iter().zip(&w).filter(|(c, _)| !c.is_zero()).map(|(c, x)| x.scale(c)).sum();
                    out.set(a, b, l, v);
                }
            }
        }
        Some(out)
    }
}

/// Witness of a failed Leibniz identity on `(e_i, e_j, e_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeibnizWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub residual: Element,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeibnizCheck {
    pub holds: bool,
    pub witness: Option<LeibnizWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Nilpotency {
    Nilpotent { class: usize },
    /// The chain stalled at a nonzero space; `at_cap` flags a stall detected
    /// only at the last permitted step.
    NotNilpotent { stable_dim: usize, stalled_at: usize, at_cap: bool },
    /// Neither vanished nor stalled within the bound.
    CapReached { cap: usize, dim: usize },
}

impl Nilpotency {
    pub fn class(&self) -> Option<usize> {
        match self {
            Nilpotency::Nilpotent { class } => Some(*class),
            _ => None,
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        matches!(self, Nilpotency::Nilpotent { .. })
    }
}

/// Span of coordinate vectors, independent over the parameter fraction field.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: Vec<Element>,
}

impl Subspace {
    pub fn full(n: usize) -> Self {
        Subspace { ambient: n, basis: (0..n).map(|i| basis_element(i, n)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn basis_element(i: usize, n: usize) -> Element {
    (0..n).map(|l| if l == i { Poly::one() } else { Poly::zero() }).collect()
}

/// The generic element X_r = Σ_i x_{r,i} e_i (copy `r` is 1-based).
pub fn generic_element(r: usize, n: usize) -> Element {
    (1..=n).map(|i| Poly::coord(r, i)).collect()
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    dim: usize,
    table: Vec<Vec<Vec<Poly>>>,
    #[serde(default)]
    constraints: Vec<Poly>,
}

impl Serialize for StructureTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = self.dim;
        let table = (0..n).map(|i| (0..n).map(|j| self.product(i, j)).collect()).collect();
        TableRepr { dim: n, table, constraints: self.constraints.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StructureTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = TableRepr::deserialize(deserializer)?;
        StructureTable::try_from(repr).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<TableRepr> for StructureTable {
    type Error = AlgebraError;

    fn try_from(repr: TableRepr) -> Result<Self, AlgebraError> {
        let n = repr.dim;
        if n == 0 {
            return Err(AlgebraError::InvalidTable("dim must be positive".into()));
        }
        if repr.table.len() != n || repr.table.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n)) {
            return Err(AlgebraError::InvalidTable(format!("table must be {n}×{n}×{n}")));
        }
        let mut t = StructureTable::zero(n);
        for (i, row) in repr.table.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                for (l, p) in v.into_iter().enumerate() {
                    if p.has_coords() {
                        return Err(AlgebraError::InvalidTable(format!("entry ({},{},{}) mentions a coordinate", i + 1, j + 1, l + 1)));
                    }
                    t.set(i, j, l, p);
                }
            }
        }
        t.constraints = repr.constraints;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Element {
        basis_element(i, 3)
    }
    fn scaled(i: usize, c: i64) -> Element {
        e(i).into_iter().map(|p| p.scale(&Rational::from_int(c))).collect()
    }
    fn l1() -> StructureTable {
        StructureTable::from_products(3, [(0, 2, scaled(0, -2)), (1, 1, e(0)), (1, 2, scaled(1, -1)), (2, 1, e(1))])
    }
    fn l8() -> StructureTable {
        StructureTable::from_products(3, [(0, 2, e(1)), (2, 2, e(0))])
    }

    #[test]
    fn products_and_matrices() {
        let t = l1();
        assert_eq!(t.mul(&e(1), &e(1)).unwrap(), e(0));
        let (ml, mr) = t.mult_matrices(2).unwrap();
        assert_eq!(ml.get(1, 1), &Poly::one());
        assert_eq!((0..3).flat_map(|l| (0..3).map(move |j| (l, j))).filter(|&(l, j)| !ml.get(l, j).is_zero()).count(), 1);
        assert_eq!(mr.get(0, 0), &Poly::int(-2));
        assert_eq!(mr.get(1, 1), &Poly::int(-1));
        assert!(t.mult_matrices(3).is_err());
        assert!(t.mul(&e(0), &[Poly::one()]).is_err());
    }

    #[test]
    fn double_matrices_by_contraction() {
        let (_, r) = l8().double_mult_matrices(2, 2).unwrap();
        assert!(r.is_zero());
        let (l, _) = l8().double_mult_matrices(2, 2).unwrap();
        // e3e3 = e1, and L_{e1} sends e3 to e2
        assert_eq!(l.get(1, 2), &Poly::one());
    }

    #[test]
    fn leibniz_failure_witness() {
        let t = StructureTable::from_products(1, [(0, 0, vec![Poly::one()])]);
        let chk = t.check_leibniz();
        assert!(!chk.holds);
        let w = chk.witness.unwrap();
        assert_eq!((w.i, w.j, w.k), (0, 0, 0));
        assert_eq!(w.residual, vec![Poly::int(-1)]);
        assert!(StructureTable::zero(3).check_leibniz().holds);
        assert!(l1().check_leibniz().holds);
    }

    #[test]
    fn invariant_subspaces() {
        let ctx = PivotContext::default();
        assert_eq!(l1().leib_ideal(&ctx).unwrap().dim(), 1);
        assert_eq!(StructureTable::zero(3).leib_ideal(&ctx).unwrap().dim(), 0);
        assert_eq!(StructureTable::zero(3).right_annihilator(&ctx).unwrap().dim(), 3);
        let l11 = StructureTable::from_products(3, [(2, 2, e(0))]);
        assert_eq!(l11.right_annihilator(&ctx).unwrap().dim(), 2);
        assert_eq!(l11.derivation_dim(&ctx).unwrap(), 5);
        assert_eq!(l1().derivation_dim(&ctx).unwrap(), 2);
    }

    #[test]
    fn nilpotency() {
        let ctx = PivotContext::generic();
        assert_eq!(l8().nilpotency_class(5, &ctx).unwrap(), Nilpotency::Nilpotent { class: 4 });
        assert!(matches!(l8().nilpotency_class(2, &ctx).unwrap(), Nilpotency::CapReached { cap: 2, .. }));
        assert!(matches!(l1().nilpotency_class(5, &ctx).unwrap(), Nilpotency::NotNilpotent { .. }));
    }

    #[test]
    fn conjugation_round_trip() {
        let p = vec![
            vec![Rational::from_int(1), Rational::from_int(2), Rational::from_int(0)],
            vec![Rational::from_int(0), Rational::from_int(1), Rational::from_int(3)],
            vec![Rational::from_int(1), Rational::from_int(0), Rational::from_int(1)],
        ];
        let t = l1();
        let c = t.change_basis(&p).unwrap();
        assert!(c.check_leibniz().holds);
        let back = c.change_basis(&linalg::rational_inverse(&p).unwrap()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_round_trip() {
        let t = l1();
        let js = serde_json::to_string(&t).unwrap();
        let back: StructureTable = serde_json::from_str(&js).unwrap();
        assert_eq!(back, t);
        let bad = r#"{"dim":2,"table":[[[0,0]]]}"#;
        assert!(serde_json::from_str::<StructureTable>(bad).is_err());
    }
}
