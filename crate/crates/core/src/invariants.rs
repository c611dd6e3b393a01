//! Polynomial invariants of the automorphism group acting diagonally on m
//! copies of the algebra, degree by degree, as nullspaces of exact linear
//! systems; generator checks; the copy-merging maps π; the L7 witness.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebra::{Element, StructureTable};
use crate::aut::{branch_rewrite, AutFamily, Branch, DiagonalFamily};
use crate::catalog::{symbolic_table, Family, FamilyRecord};
use crate::exact::linalg::{self, PolyMatrix};
use crate::exact::{LinalgError, Monomial, Param, PivotContext, Poly, RewriteSystem, Var};
use crate::par::{self, Strategy};

pub type MultiDegree = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("multidegree {0:?} has the wrong number of copies")]
    Copies(MultiDegree),
    #[error("polynomial involves copy {copy} but the partition covers only {total}")]
    Partition { copy: usize, total: usize },
    #[error("generator {0} is not multihomogeneous")]
    NotHomogeneous(String),
}

#[derive(Clone, Copy, Debug)]
pub struct InvariantOptions {
    /// Restrict candidates using the diagonal subgroup (exact, not a heuristic).
    pub diag_pruning: bool,
    pub strategy: Strategy,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions { diag_pruning: true, strategy: Strategy::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantComponent {
    pub multidegree: MultiDegree,
    pub candidates: usize,
    pub basis: Vec<Poly>,
}

/// Bases of the multihomogeneous invariant components.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantSpace {
    pub n: usize,
    pub m: usize,
    pub branches: Vec<String>,
    pub components: Vec<InvariantComponent>,
}

impl InvariantSpace {
    pub fn component(&self, d: &[u32]) -> Option<&InvariantComponent> {
        self.components.iter().find(|c| c.multidegree == d)
    }

    pub fn dims(&self) -> BTreeMap<MultiDegree, usize> {
        self.components.iter().map(|c| (c.multidegree.clone(), c.basis.len())).collect()
    }
}

/// Default degree range: m = 1 up to 4, m = 2 up to 3, m = 3 only (1,1,1).
pub fn default_degrees(m: usize) -> Vec<MultiDegree> {
    match m {
        1 => crate::trace::multidegrees_up_to(4, 1),
        2 => crate::trace::multidegrees_up_to(3, 2),
        _ => vec![vec![1; m]],
    }
}

fn monomials_of_degree(vars: &[Var], d: u32) -> Vec<Monomial> {
    if d == 0 {
        return vec![Monomial::one()];
    }
    let Some((first, rest)) = vars.split_first() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for e in (0..=d).rev() {
        for tail in monomials_of_degree(rest, d - e) {
            out.push(if e == 0 { tail } else { Monomial::power(*first, e).mul(&tail) });
        }
    }
    out
}

/// Coordinate monomials of multidegree `d` in n variables per copy, avoiding `excluded`.
pub fn coordinate_monomials(n: usize, d: &[u32], excluded: &BTreeSet<Var>) -> Vec<Monomial> {
    let mut acc = vec![Monomial::one()];
    for (r, &dr) in d.iter().enumerate() {
        let vars: Vec<Var> = (1..=n).map(|i| Var::coord(r + 1, i)).filter(|v| !excluded.contains(v)).collect();
        let part = monomials_of_degree(&vars, dr);
        acc = acc.iter().flat_map(|a| part.iter().map(move |b| a.mul(b))).collect();
    }
    acc
}

/// Rows of the invariance system for one branch: coefficients of every
/// (group parameter × coordinate) monomial in σ_g(w) − w.
fn branch_rows(g: &Branch, cands: &[Monomial], m: usize) -> Vec<Vec<Poly>> {
    let sigma = g.action_substitution(m);
    let cols: Vec<BTreeMap<Monomial, Poly>> = cands
        .iter()
        .map(|w| {
            let p = Poly::term(w.clone(), crate::exact::Rational::one());
            branch_rewrite(&p.substitute(&sigma).sub_ref(&p)).coefficients_by(|v| match v.param() {
                Some(p) => !p.is_field_param(),
                None => true,
            })
        })
        .collect();
    let keys: BTreeSet<&Monomial> = cols.iter().flat_map(|c| c.keys()).collect();
    let laurent = RewriteSystem::laurent_lambda();
    keys.into_iter()
        .map(|k| {
            let mut row: Vec<Poly> = cols.iter().map(|c| c.get(k).cloned().unwrap_or_default()).collect();
            // clear 1/λ = μ by scaling the row with a power of λ
            let mu_deg = row.iter().map(|p| p.degree_in(Var::Param(Param::Mu))).max().unwrap_or(0);
            if mu_deg > 0 {
                let s = Poly::param(Param::Lambda).pow(mu_deg);
                row = row.iter().map(|p| laurent.normal_form(&p.mul_ref(&s))).collect();
            }
            row
        })
        .collect()
}

fn component(
    group: &AutFamily,
    n: usize,
    m: usize,
    d: &[u32],
    diag: Option<&DiagonalFamily>,
    ctx: &PivotContext,
) -> Result<InvariantComponent, InvariantError> {
    let excluded = diag.map(|f| f.eliminated_vars(m)).unwrap_or_default();
    let mut cands = coordinate_monomials(n, d, &excluded);
    if let Some(f) = diag {
        cands.retain(|w| f.monomial_is_fixed(w));
    }
    let mut rows: Vec<Vec<Poly>> = group.branches.iter().flat_map(|g| branch_rows(g, &cands, m)).collect();
    rows.sort_by_key(|r| r.iter().map(|p| p.len()).sum::<usize>());
    rows.dedup();
    let basis = if cands.is_empty() {
        Vec::new()
    } else if rows.is_empty() {
        cands.iter().map(|w| Poly::term(w.clone(), crate::exact::Rational::one())).collect()
    } else {
        let mut mat = PolyMatrix::with_cols(cands.len());
        for r in rows {
            mat.push_row(r);
        }
        linalg::nullspace(&mat, ctx)?
            .into_iter()
            .map(|v| v.iter().zip(&cands).map(|(c, w)| c.mul_monomial(w, &crate::exact::Rational::one())).sum())
            .collect()
    };
    Ok(InvariantComponent { multidegree: d.to_vec(), candidates: cands.len(), basis })
}

/// Invariants of `group` acting on m copies of an n-dimensional space.
pub fn invariant_space_for(
    group: &AutFamily,
    n: usize,
    m: usize,
    degrees: &[MultiDegree],
    diag: Option<&DiagonalFamily>,
    ctx: &PivotContext,
    opts: InvariantOptions,
) -> Result<InvariantSpace, InvariantError> {
    if let Some(d) = degrees.iter().find(|d| d.len() != m) {
        return Err(InvariantError::Copies(d.clone()));
    }
    let diag = diag.filter(|_| opts.diag_pruning);
    let components = par::try_map(opts.strategy, degrees, |d| component(group, n, m, d, diag, ctx))?;
    Ok(InvariantSpace { n, m, branches: group.branches.iter().map(|b| b.name.clone()).collect(), components })
}

pub fn invariant_space(
    rec: &FamilyRecord,
    m: usize,
    degrees: &[MultiDegree],
    opts: InvariantOptions,
) -> Result<InvariantSpace, InvariantError> {
    let ctx = PivotContext::strict(rec.table.constraints().to_vec());
    invariant_space_for(&rec.aut, rec.table.dim(), m, degrees, rec.diag.as_ref(), &ctx, opts)
}

/// Multidegree of a multihomogeneous coordinate polynomial.
pub fn multidegree_of(p: &Poly, m: usize) -> Option<MultiDegree> {
    let (lead, _) = p.leading_term()?;
    let d = lead.multidegree(m);
    p.is_homogeneous_of(&d).then_some(d)
}

/// All products of the generators (with repetition) of multidegree exactly `d`.
fn products_of_degree(gens: &[(MultiDegree, Poly)], d: &[u32]) -> Vec<Poly> {
    if d.iter().all(|&x| x == 0) {
        return vec![Poly::one()];
    }
    let mut out = Vec::new();
    for (k, (gd, g)) in gens.iter().enumerate() {
        if gd.iter().all(|&x| x == 0) || gd.iter().zip(d).any(|(a, b)| a > b) {
            continue;
        }
        let rest: Vec<u32> = d.iter().zip(gd).map(|(a, b)| a - b).collect();
        for h in products_of_degree(&gens[k..], &rest) {
            out.push(g.mul_ref(&h));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeComparison {
    pub multidegree: MultiDegree,
    pub invariant_dim: usize,
    pub generated_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenerationReport {
    pub degrees: Vec<DegreeComparison>,
    /// Claimed generators that some branch moves.
    pub not_invariant: Vec<Poly>,
    pub holds: bool,
}

/// Compares, per multidegree, the span of products of `generators` (plus 1)
/// with the computed invariant component, after checking each generator is
/// itself invariant.
pub fn check_generation(
    group: &AutFamily,
    generators: &[Poly],
    space: &InvariantSpace,
    ctx: &PivotContext,
    strategy: Strategy,
) -> Result<GenerationReport, InvariantError> {
    let m = space.m;
    let mut gens = Vec::new();
    for g in generators {
        let d = multidegree_of(g, m).ok_or_else(|| InvariantError::NotHomogeneous(g.to_string()))?;
        gens.push((d, g.clone()));
    }
    let not_invariant: Vec<Poly> = generators.iter().filter(|g| !group.fixes(g, m)).cloned().collect();
    let degrees = par::try_map(strategy, &space.components, |c| {
        let prods = products_of_degree(&gens, &c.multidegree);
        let generated_dim = linalg::poly_span_dim(&prods, ctx)?;
        Ok::<_, InvariantError>(DegreeComparison {
            multidegree: c.multidegree.clone(),
            invariant_dim: c.basis.len(),
            generated_dim,
        })
    })?;
    let holds = not_invariant.is_empty() && degrees.iter().all(|d| d.invariant_dim == d.generated_dim);
    Ok(GenerationReport { degrees, not_invariant, holds })
}

/// The unipotent group {[[1, α], [0, 1]]} on m copies of a plane.
pub fn unipotent2_group() -> AutFamily {
    let m = PolyMatrix::from_rows(vec![
        vec![Poly::one(), Poly::param(Param::alpha(1))],
        vec![Poly::zero(), Poly::one()],
    ]);
    AutFamily::new(vec![Branch::new("u", m, Vec::new()).expect("unipotent")])
}

/// x_{r,2} for every r and x_{r,1}x_{s,2} − x_{r,2}x_{s,1} for r < s.
pub fn unipotent2_generators(m: usize) -> Vec<Poly> {
    let x = |r, i| Poly::coord(r, i);
    let mut out: Vec<Poly> = (1..=m).map(|r| x(r, 2)).collect();
    for r in 1..=m {
        for s in r + 1..=m {
            out.push(&(&x(r, 1) * &x(s, 2)) - &(&x(r, 2) * &x(s, 1)));
        }
    }
    out
}

pub fn unipotent2_invariants(m: usize, degrees: &[MultiDegree], opts: InvariantOptions) -> Result<InvariantSpace, InvariantError> {
    invariant_space_for(&unipotent2_group(), 2, m, degrees, None, &PivotContext::strict(Vec::new()), opts)
}

/// π for a partition (r₁, …, r_m) of t: copy l ↦ the j with
/// r₁+…+r_{j−1} < l ≤ r₁+…+r_j.
pub fn pi_substitution(p: &Poly, partition: &[u32]) -> Result<Poly, InvariantError> {
    let total: usize = partition.iter().map(|&r| r as usize).sum();
    let mut target = Vec::with_capacity(total);
    for (j, &r) in partition.iter().enumerate() {
        target.extend(std::iter::repeat_n(j + 1, r as usize));
    }
    for v in p.vars() {
        if let Var::Coord { copy, .. } = v {
            if copy as usize > total {
                return Err(InvariantError::Partition { copy: copy as usize, total });
            }
        }
    }
    Ok(p.map_vars(|v| match v {
        Var::Coord { copy, index } => Var::coord(target[copy as usize - 1], index as usize),
        other => other,
    }))
}

/// All compositions of t into m positive parts.
pub fn partitions_into(t: u32, m: usize) -> Vec<Vec<u32>> {
    if m == 0 {
        return if t == 0 { vec![vec![]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=t {
        for mut rest in partitions_into(t - first, m - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessIdentity {
    pub name: String,
    pub residual: Poly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct L7WitnessReport {
    pub identities: Vec<WitnessIdentity>,
    pub products: Vec<WitnessIdentity>,
    pub holds: bool,
}

/// The change of basis exhibiting L7^λ (λ ≠ 0, −1/4) inside L7^{λ'} with
/// ξ₁, ξ₂ the roots of ξ² + ξ − λ: checked in ℚ[λ, ξ₁]/(ξ₁² + ξ₁ − λ) with
/// ν = (2ξ₁+1)/(ξ₁−2λ), λ' = ξ₂/ξ₁ and every denominator cleared.
pub fn verify_l7_witness() -> L7WitnessReport {
    let rw = RewriteSystem::xi_relations();
    let lam = Poly::param(Param::Lambda);
    let xi1 = Poly::param(Param::Xi1);
    let xi2 = Poly::param(Param::Xi2);
    let one = Poly::one();
    let nu_num = &(&xi1 * &Poly::int(2)) + &one;
    let den = &xi1 - &(&lam * &Poly::int(2));
    let nf = |p: Poly| rw.normal_form(&p);
    let id = |name: &str, p: Poly| WitnessIdentity { name: name.to_string(), residual: nf(p) };
    let identities = vec![
        // νλ = λ'ξ₁, times ξ₁(ξ₁ − 2λ)
        id("nu*lambda = lambda'*xi1", &(&(&nu_num * &lam) * &xi1) - &(&(&xi2 * &den) * &xi1)),
        // ν(ξ₁ + 1) = λ', times ξ₁(ξ₁ − 2λ)
        id("nu*(xi1+1) = lambda'", &(&(&nu_num * &(&xi1 + &one)) * &xi1) - &(&xi2 * &den)),
        id("nu*lambda = xi2", &(&nu_num * &lam) - &(&xi2 * &den)),
        id("nu*(xi2+1) = 1", &(&nu_num * &(&xi2 + &one)) - &den),
    ];

    let t: StructureTable = symbolic_table(Family::L7);
    let vec3 = |a: Poly, b: Poly, c: Poly| -> Element { vec![a, b, c] };
    let v1 = vec3(xi1.clone(), one.clone(), Poly::zero());
    let v2 = vec3(xi2.clone(), one.clone(), Poly::zero());
    // v₃ = ν e₃ scaled by ξ₁ − 2λ
    let v3 = vec3(Poly::zero(), Poly::zero(), nu_num.clone());
    let v = [v1, v2, v3];
    let prod = |a: &Element, b: &Element| t.mul(a, b).expect("dimension 3");
    let scale = |p: &Poly, u: &Element| -> Element { u.iter().map(|x| x.mul_ref(p)).collect() };
    let diff = |a: Element, b: Element| -> Poly {
        // fold the three coordinates into one residual with distinct markers
        a.iter()
            .zip(&b)
            .enumerate()
            .map(|(k, (x, y))| nf(x.sub_ref(y)).mul_ref(&Poly::param(Param::Coeff(k as u32))))
            .sum()
    };
    let zero = vec![Poly::zero(); 3];
    let mut products = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            let lhs = prod(&v[a], &v[b]);
            let (name, residual) = match (a, b) {
                // ξ₁·(v₁v₃') = (ξ₁ − 2λ)·ξ₂·v₁, i.e. v₁v₃ = λ'v₁
                (0, 2) => ("v1*v3 = lambda'*v1", diff(scale(&xi1, &lhs), scale(&(&den * &xi2), &v[0]))),
                // v₂v₃' = (ξ₁ − 2λ)·v₂, i.e. v₂v₃ = v₂
                (1, 2) => ("v2*v3 = v2", diff(lhs, scale(&den, &v[1]))),
                _ => ("", diff(lhs, zero.clone())),
            };
            let name = if name.is_empty() { format!("v{}*v{} = 0", a + 1, b + 1) } else { name.to_string() };
            products.push(WitnessIdentity { name, residual });
        }
    }
    let holds = identities.iter().chain(&products).all(|w| w.residual.is_zero());
    L7WitnessReport { identities, products, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_family;

    fn seq() -> InvariantOptions {
        InvariantOptions { diag_pruning: true, strategy: Strategy::Sequential }
    }

    #[test]
    fn monomial_counts() {
        let none = BTreeSet::new();
        assert_eq!(coordinate_monomials(3, &[2], &none).len(), 6);
        assert_eq!(coordinate_monomials(3, &[2, 1], &none).len(), 18);
        assert_eq!(coordinate_monomials(3, &[0, 0], &none), vec![Monomial::one()]);
    }

    #[test]
    fn l1_invariants_single_copy() {
        let rec = get_family(Family::L1, None).unwrap();
        let sp = invariant_space(&rec, 1, &default_degrees(1), seq()).unwrap();
        for c in &sp.components {
            assert_eq!(c.basis.len(), 1, "{:?}", c.multidegree);
            assert_eq!(c.basis[0], Poly::coord(1, 3).pow(c.multidegree[0]));
        }
    }

    #[test]
    fn l3_pair_invariant() {
        let rec = get_family(Family::L3, None).unwrap();
        let sp = invariant_space(&rec, 2, &[vec![1, 1]], seq()).unwrap();
        assert_eq!(sp.components[0].basis.len(), 2);
    }

    #[test]
    fn unipotent_generation() {
        let sp = unipotent2_invariants(2, &crate::trace::multidegrees_up_to(3, 2), seq()).unwrap();
        let rep = check_generation(
            &unipotent2_group(),
            &unipotent2_generators(2),
            &sp,
            &PivotContext::strict(Vec::new()),
            Strategy::Sequential,
        )
        .unwrap();
        assert!(rep.holds, "{rep:?}");
    }

    #[test]
    fn pi_merges_copies() {
        let p = &Poly::coord(1, 1) * &Poly::coord(3, 2);
        assert_eq!(pi_substitution(&p, &[2, 1]).unwrap(), &Poly::coord(1, 1) * &Poly::coord(2, 2));
        assert!(pi_substitution(&p, &[1, 1]).is_err());
        assert_eq!(partitions_into(3, 2), vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn l7_witness_holds() {
        let rep = verify_l7_witness();
        assert!(rep.holds, "{rep:?}");
    }

    #[test]
    fn pruning_is_exact() {
        let rec = get_family(Family::L3, None).unwrap();
        let on = invariant_space(&rec, 2, &[vec![1, 1], vec![2, 0]], seq()).unwrap();
        let off = invariant_space(&rec, 2, &[vec![1, 1], vec![2, 0]], InvariantOptions { diag_pruning: false, ..seq() })
            .unwrap();
        assert_eq!(on.dims(), off.dims());
    }

    #[test]
    fn catalog_generators_generate() {
        for rec in crate::catalog::all_records().iter().chain(&crate::catalog::sampled_records()) {
            let ctx = PivotContext::strict(rec.table.constraints().to_vec());
            for m in 1..=3 {
                let sp = invariant_space(rec, m, &default_degrees(m), seq()).unwrap();
                let rep = check_generation(&rec.aut, &rec.generators(m), &sp, &ctx, Strategy::Sequential).unwrap();
                assert!(rep.holds, "{} m={m}: {rep:?}", rec.label());
            }
        }
    }
}
