//! Parameterized automorphism families and their action on coordinates.
//!
//! A branch matrix sends e_j to its j-th column. Its induced substitution is
//! x_{r,i} ↦ Σ_j g_ij x_{r,j}, and f is invariant under the branch iff that
//! substitution fixes f identically in the branch parameters.

use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{basis_element, Element, StructureTable};
use crate::exact::linalg::{self, PolyMatrix};
use crate::exact::{Monomial, Param, Poly, RewriteSystem, Substitution, Var};
use crate::par::{self, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutError {
    #[error("branch `{0}` has identically vanishing determinant")]
    SingularBranch(String),
    #[error("branch matrix must be square of size {expected}, got {rows}×{cols}")]
    Shape { expected: usize, rows: usize, cols: usize },
}

/// Rewrites applied after arithmetic on branch entries: λμ ↦ 1 when μ occurs.
pub fn branch_rewrite(p: &Poly) -> Poly {
    if p.vars().contains(&Var::Param(Param::Mu)) {
        RewriteSystem::laurent_lambda().normal_form(p)
    } else {
        p.clone()
    }
}

fn is_group_param(p: &Param) -> bool {
    matches!(p, Param::Alpha { .. } | Param::Diag { .. })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub name: String,
    matrix: PolyMatrix,
    params: Vec<Param>,
    pub nonvanishing: Vec<Poly>,
}

impl Branch {
    /// Rejects matrices whose determinant vanishes identically.
    pub fn new(name: impl Into<String>, matrix: PolyMatrix, nonvanishing: Vec<Poly>) -> Result<Self, AutError> {
        let name = name.into();
        if matrix.rows() != matrix.cols() {
            return Err(AutError::Shape { expected: matrix.rows(), rows: matrix.rows(), cols: matrix.cols() });
        }
        let det = branch_rewrite(&linalg::determinant(&matrix));
        if det.is_zero() {
            return Err(AutError::SingularBranch(name));
        }
        let mut params: Vec<Param> = (0..matrix.rows())
            .flat_map(|i| matrix.row(i).iter().flat_map(|p| p.vars()).collect::<Vec<_>>())
            .filter_map(|v| v.param())
            .filter(is_group_param)
            .collect();
        params.sort();
        params.dedup();
        Ok(Branch { name, matrix, params, nonvanishing })
    }

    pub fn identity(n: usize) -> Self {
        Branch::new("identity", PolyMatrix::identity(n), Vec::new()).expect("identity is invertible")
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Free group parameters (α's and diagonal α, β).
    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn determinant(&self) -> Poly {
        branch_rewrite(&linalg::determinant(&self.matrix))
    }

    pub fn apply(&self, v: &[Poly]) -> Element {
        self.matrix.mul_vec(v).iter().map(branch_rewrite).collect()
    }

    /// Renames every group parameter into copy `copy`, giving an independent
    /// point of the same branch.
    pub fn with_copy(&self, copy: u8) -> Branch {
        let rename = |v: Var| match v {
            Var::Param(Param::Alpha { index, .. }) => Var::Param(Param::Alpha { index, copy }),
            Var::Param(Param::Diag { which, .. }) => Var::Param(Param::Diag { which, copy }),
            other => other,
        };
        let matrix = self.matrix.map(|p| p.map_vars(rename));
        let nonvanishing = self.nonvanishing.iter().map(|p| p.map_vars(rename)).collect();
        Branch::new(format!("{}#{copy}", self.name), matrix, nonvanishing).expect("renaming preserves invertibility")
    }

    /// The product g·h (apply h first), parameters kept as given.
    pub fn compose(&self, other: &Branch) -> Branch {
        let matrix = self.matrix.mul(&other.matrix).map(branch_rewrite);
        let mut nonvanishing = self.nonvanishing.clone();
        nonvanishing.extend(other.nonvanishing.iter().cloned());
        Branch::new(format!("{}∘{}", self.name, other.name), matrix, nonvanishing).expect("product of invertible matrices")
    }

    /// x_{r,i} ↦ Σ_j g_ij x_{r,j} for every copy r ≤ m.
    pub fn action_substitution(&self, m: usize) -> Substitution {
        let n = self.dim();
        let mut sigma = Substitution::new();
        for r in 1..=m {
            for i in 0..n {
                let image: Poly = (0..n)
                    .filter(|&j| !self.matrix.get(i, j).is_zero())
                    .map(|j| self.matrix.get(i, j).mul_ref(&Poly::coord(r, j + 1)))
                    .sum();
                sigma.insert(Var::coord(r, i + 1), image);
            }
        }
        sigma
    }

    /// `σ_g(f) − f`, reduced.
    pub fn invariance_residual(&self, f: &Poly, m: usize) -> Poly {
        branch_rewrite(&f.substitute(&self.action_substitution(m)).sub_ref(f))
    }

    pub fn fixes(&self, f: &Poly, m: usize) -> bool {
        self.invariance_residual(f, m).is_zero()
    }
}

/// A finite union of branches.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AutFamily {
    pub branches: Vec<Branch>,
}

impl AutFamily {
    pub fn new(branches: Vec<Branch>) -> Self {
        AutFamily { branches }
    }

    /// Largest free-parameter count over the branches.
    pub fn parameter_count(&self) -> usize {
        self.branches.iter().map(|b| b.params().len()).max().unwrap_or(0)
    }

    pub fn fixes(&self, f: &Poly, m: usize) -> bool {
        self.branches.iter().all(|b| b.fixes(f, m))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AutWitness {
    pub branch: String,
    pub i: usize,
    pub j: usize,
    pub residual: Element,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AutCheck {
    pub holds: bool,
    pub witness: Option<AutWitness>,
}

/// `g(e_i e_j) − g(e_i) g(e_j)` for every pair, or the first violation.
pub fn verify_branch(t: &StructureTable, g: &Branch) -> Option<AutWitness> {
    let n = t.dim();
    assert_eq!(n, g.dim(), "dimension mismatch");
    let images: Vec<Element> = (0..n).map(|i| g.apply(&basis_element(i, n))).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = g.apply(&t.product(i, j));
            let rhs = t.mul_unchecked(&images[i], &images[j]);
            let residual: Element = lhs.iter().zip(&rhs).map(|(a, b)| branch_rewrite(&a.sub_ref(b))).collect();
            if residual.iter().any(|p| !p.is_zero()) {
                return Some(AutWitness { branch: g.name.clone(), i, j, residual });
            }
        }
    }
    None
}

pub fn verify_aut_family(t: &StructureTable, family: &AutFamily, strategy: Strategy) -> AutCheck {
    let found = par::map(strategy, &family.branches, |b| verify_branch(t, b));
    let witness = found.into_iter().flatten().next();
    AutCheck { holds: witness.is_none(), witness }
}

/// Per-index weight α^a β^b, optionally with a ± sign choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagWeight {
    pub alpha: u32,
    pub beta: u32,
    #[serde(default)]
    pub signed: bool,
}

impl DiagWeight {
    pub const fn new(alpha: u32, beta: u32) -> Self {
        DiagWeight { alpha, beta, signed: false }
    }

    pub const fn signed(alpha: u32, beta: u32) -> Self {
        DiagWeight { alpha, beta, signed: true }
    }
}

/// diag(±α^{a₁}β^{b₁}, …) for all nonzero α, β.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalFamily {
    pub weights: Vec<DiagWeight>,
}

impl DiagonalFamily {
    pub fn new(weights: Vec<DiagWeight>) -> Self {
        DiagonalFamily { weights }
    }

    fn uses(&self, which: u8) -> bool {
        self.weights.iter().any(|w| if which == 0 { w.alpha > 0 } else { w.beta > 0 })
    }

    fn sign_patterns(&self) -> Vec<Vec<bool>> {
        let signed: Vec<usize> = (0..self.weights.len()).filter(|&i| self.weights[i].signed).collect();
        (0..1usize << signed.len())
            .map(|mask| {
                let mut neg = vec![false; self.weights.len()];
                for (b, &i) in signed.iter().enumerate() {
                    neg[i] = mask >> b & 1 == 1;
                }
                neg
            })
            .collect()
    }

    /// One explicit branch per sign pattern.
    pub fn branches(&self) -> Vec<Branch> {
        let n = self.weights.len();
        let alpha = Poly::param(Param::Diag { which: 0, copy: 0 });
        let beta = Poly::param(Param::Diag { which: 1, copy: 0 });
        let mut nonvanishing = Vec::new();
        if self.uses(0) {
            nonvanishing.push(alpha.clone());
        }
        if self.uses(1) {
            nonvanishing.push(beta.clone());
        }
        self.sign_patterns()
            .into_iter()
            .map(|neg| {
                let mut m = PolyMatrix::zeros(n, n);
                let mut tag = String::from("diag");
                for (i, w) in self.weights.iter().enumerate() {
                    let mut p = &alpha.pow(w.alpha) * &beta.pow(w.beta);
                    if neg[i] {
                        p = -p;
                    }
                    if w.signed {
                        tag.push(if neg[i] { '-' } else { '+' });
                    }
                    m.set(i, i, p);
                }
                Branch::new(tag, m, nonvanishing.clone()).expect("diagonal entries are nonzero monomials")
            })
            .collect()
    }

    /// Nonnegative weight vectors of the one-parameter subgroups obtained by
    /// freeing one of α, β and fixing the other to 1, on the + sign branch.
    pub fn one_parameter_weights(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for which in 0..2u8 {
            if self.uses(which) {
                out.push(self.weights.iter().map(|w| if which == 0 { w.alpha } else { w.beta }).collect());
            }
        }
        out
    }

    /// Coordinates that no invariant can involve: x_{r,i} with positive weight
    /// in some one-parameter subgroup.
    pub fn eliminated_vars(&self, m: usize) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for w in self.one_parameter_weights() {
            for (i, &a) in w.iter().enumerate() {
                if a > 0 {
                    for r in 1..=m {
                        out.insert(Var::coord(r, i + 1));
                    }
                }
            }
        }
        out
    }

    /// Whether a coordinate monomial is fixed by every element of the family:
    /// zero total α- and β-weight, and an even degree in the signed positions.
    pub fn monomial_is_fixed(&self, mono: &Monomial) -> bool {
        let (mut a, mut b) = (0u32, 0u32);
        let mut signed_degree = 0u32;
        for (v, e) in mono.iter() {
            let Var::Coord { index, .. } = v else { continue };
            let w = self.weights[index as usize - 1];
            a += w.alpha * e;
            b += w.beta * e;
            if w.signed {
                signed_degree += e;
            }
        }
        a == 0 && b == 0 && signed_degree.is_multiple_of(2)
    }
}

#[derive(Serialize, Deserialize)]
struct BranchRepr {
    name: String,
    matrix: Vec<Vec<Poly>>,
    #[serde(default)]
    params: Vec<String>,
    #[serde(default)]
    nonvanishing: Vec<Poly>,
}

impl Serialize for Branch {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BranchRepr {
            name: self.name.clone(),
            matrix: self.matrix.row_vecs(),
            params: self.params.iter().map(Param::name).collect(),
            nonvanishing: self.nonvanishing.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Branch {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = BranchRepr::deserialize(deserializer)?;
        let n = r.matrix.len();
        if r.matrix.iter().any(|row| row.len() != n) {
            return Err(serde::de::Error::custom("branch matrix must be square"));
        }
        Branch::new(r.name, PolyMatrix::from_rows(r.matrix), r.nonvanishing).map_err(serde::de::Error::custom)
    }
}

impl Serialize for AutFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            branches: &'a [Branch],
        }
        Repr { branches: &self.branches }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AutFamily {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            branches: Vec<Branch>,
        }
        Ok(AutFamily { branches: Repr::deserialize(deserializer)?.branches })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(k: u8) -> Poly {
        Poly::param(Param::alpha(k))
    }
    fn p(n: i64) -> Poly {
        Poly::int(n)
    }

    #[test]
    fn unipotent_shear_fixes_bilinear() {
        // restriction of the L3 group to span{e1, e3}
        let g = Branch::new("shear", PolyMatrix::from_rows(vec![vec![p(1), a(3)], vec![p(0), p(1)]]), vec![]).unwrap();
        let f = &(&Poly::coord(1, 1) * &Poly::coord(2, 2)) - &(&Poly::coord(1, 2) * &Poly::coord(2, 1));
        assert!(g.fixes(&f, 2));
        assert!(g.fixes(&Poly::coord(1, 2), 1));
        assert!(!g.fixes(&Poly::coord(1, 1), 1));
    }

    #[test]
    fn singular_branch_rejected() {
        let m = PolyMatrix::from_rows(vec![vec![a(1), a(1)], vec![a(1), a(1)]]);
        assert!(matches!(Branch::new("bad", m, vec![]), Err(AutError::SingularBranch(_))));
    }

    #[test]
    fn substitution_composes() {
        let g = Branch::new("g", PolyMatrix::from_rows(vec![vec![p(1), a(2)], vec![p(0), a(5)]]), vec![a(5)]).unwrap();
        let h = g.with_copy(1);
        let f = &Poly::coord(1, 1).pow(2) + &(&Poly::coord(1, 2) * &Poly::coord(2, 1));
        let two_step = f.substitute(&g.action_substitution(2)).substitute(&h.action_substitution(2));
        let one_step = f.substitute(&g.compose(&h).action_substitution(2));
        assert_eq!(two_step, one_step);
    }

    #[test]
    fn diagonal_filters() {
        let l5 = DiagonalFamily::new(vec![DiagWeight::new(2, 0), DiagWeight::new(1, 0), DiagWeight::signed(1, 0)]);
        assert_eq!(l5.branches().len(), 2);
        let y1z1 = Monomial::from_pairs([(Var::coord(1, 2), 1), (Var::coord(1, 3), 1)]);
        assert!(!l5.monomial_is_fixed(&y1z1));
        assert!(l5.monomial_is_fixed(&Monomial::one()));
        let l6 = DiagonalFamily::new(vec![DiagWeight::new(1, 0), DiagWeight::new(1, 0), DiagWeight::new(0, 0)]);
        assert!(l6.monomial_is_fixed(&Monomial::var(Var::coord(1, 3))));
        let ident = DiagonalFamily::new(vec![DiagWeight::new(0, 0); 3]);
        assert!(ident.eliminated_vars(2).is_empty());
        let l8 = DiagonalFamily::new(vec![DiagWeight::new(2, 0), DiagWeight::new(3, 0), DiagWeight::new(1, 0)]);
        assert_eq!(l8.eliminated_vars(2).len(), 6);
    }

    #[test]
    fn json_round_trip() {
        let g = Branch::new("g", PolyMatrix::from_rows(vec![vec![p(1), a(2)], vec![p(0), a(5)]]), vec![a(5)]).unwrap();
        let fam = AutFamily::new(vec![g]);
        let js = serde_json::to_string(&fam).unwrap();
        let back: AutFamily = serde_json::from_str(&js).unwrap();
        assert_eq!(back, fam);
        assert_eq!(back.parameter_count(), 2);
    }
}
