//! Exact linear algebra over ℚ and over the fraction field of a parameter
//! polynomial ring.
//!
//! Parametric systems are eliminated fraction-free (Bareiss with full
//! pivoting): every intermediate entry is a minor of the input, so the
//! divisions by the previous pivot are exact polynomial divisions.
//! Constant systems take a plain rational Gauss–Jordan route.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::monomial::Monomial;

use super::poly::Poly;
use super::rational::Rational;
use super::LinalgError;

/// Dense matrix with polynomial entries, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let n = rows.len();
        PolyMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    /// An empty matrix with a fixed column count.
    pub fn with_cols(cols: usize) -> Self {
        PolyMatrix { rows: 0, cols, data: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<Poly>) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.data.iter().all(Poly::is_constant)
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = PolyMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add_ref(&a.mul_ref(b));
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Poly {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn map<F: Fn(&Poly) -> Poly>(&self, f: F) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }
}

/// How to treat pivots that are non-constant polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotPolicy {
    /// Only constants and products of declared nonvanishing polynomials may
    /// serve as pivots; anything else is reported.
    #[default]
    Strict,
    /// Any nonzero polynomial is accepted (fraction-field semantics).
    Generic,
}

/// Side conditions for parametric elimination.
#[derive(Clone, Debug, Default)]
pub struct PivotContext {
    pub nonvanishing: Vec<Poly>,
    pub policy: PivotPolicy,
}

impl PivotContext {
    pub fn strict(nonvanishing: Vec<Poly>) -> Self {
        PivotContext { nonvanishing, policy: PivotPolicy::Strict }
    }

    pub fn generic() -> Self {
        PivotContext { nonvanishing: Vec::new(), policy: PivotPolicy::Generic }
    }

    /// Constant times a product of declared nonvanishing factors.
    pub fn is_unit(&self, p: &Poly) -> bool {
        if p.is_zero() {
            return false;
        }
        if p.is_constant() {
            return true;
        }
        let mut q = p.clone();
        for f in self.nonvanishing.iter().filter(|f| !f.is_constant()) {
            while !q.is_constant() {
                match q.div_exact(f) {
                    Some(r) => q = r,
                    None => break,
                }
            }
        }
        q.is_constant()
    }
}

/// Row echelon form from fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Pivot rows in elimination order; row `k` vanishes on the pivot
    /// columns of rows `0..k`.
    pub rows: Vec<Vec<Poly>>,
    pub pivot_cols: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

fn pivot_key(p: &Poly, ctx: &PivotContext) -> (u8, u32, usize) {
    (u8::from(!ctx.is_unit(p)), p.total_degree(), p.len())
}

fn dedup_rows(rows: Vec<Vec<Poly>>) -> Vec<Vec<Poly>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for row in rows {
        let Some(first) = row.iter().find(|p| !p.is_zero()) else {
            continue;
        };
        let lc = first.leading_term().map(|(_, c)| c.clone()).expect("nonzero");
        let inv = lc.recip().expect("nonzero");
        let norm: Vec<Poly> = row.iter().map(|p| p.scale(&inv)).collect();
        if seen.insert(norm.clone()) {
            out.push(norm);
        }
    }
    out
}

/// Fraction-free echelon form with full pivoting (lowest-degree unit first).
pub fn echelon(m: &PolyMatrix, ctx: &PivotContext) -> Result<Echelon, LinalgError> {
    let cols = m.cols();
    let mut a = dedup_rows(m.row_vecs());
    let nrows = a.len();
    let mut prev = Poly::one();
    let mut used = vec![false; cols];
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    while r < nrows {
        let mut best: Option<(usize, usize, (u8, u32, usize))> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, p) in row.iter().enumerate() {
                if used[j] || p.is_zero() {
                    continue;
                }
                let key = pivot_key(p, ctx);
                if best.as_ref().is_none_or(|b| key < b.2) {
                    best = Some((i, j, key));
                }
            }
        }
        let Some((pi, pj, key)) = best else { break };
        if key.0 == 1 && ctx.policy == PivotPolicy::Strict {
            return Err(LinalgError::UndecidedPivot { entry: a[pi][pj].to_string() });
        }
        a.swap(r, pi);
        let pivot = a[r][pj].clone();
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            let f = row[pj].clone();
            for k in 0..cols {
                if used[k] {
                    continue;
                }
                let mut v = pivot.mul_ref(&row[k]);
                if !f.is_zero() && !prow[k].is_zero() {
                    v = v.sub_ref(&f.mul_ref(&prow[k]));
                }
                row[k] = if prev.is_constant() {
                    let c = prev.as_constant().expect("constant");
                    v.scale(&c.recip().expect("nonzero pivot"))
                } else {
                    v.div_exact(&prev).ok_or(LinalgError::InexactDivision)?
                };
            }
        }
        used[pj] = true;
        pivot_cols.push(pj);
        prev = pivot;
        r += 1;
    }
    a.truncate(pivot_cols.len());
    Ok(Echelon { rows: a, pivot_cols, cols })
}

pub fn rank(m: &PolyMatrix, ctx: &PivotContext) -> Result<usize, LinalgError> {
    if m.is_constant() {
        return Ok(rational_rref(&to_rational_rows(m)).1.len());
    }
    Ok(echelon(m, ctx)?.rank())
}

/// Basis of the right nullspace, denominators and content cleared.
pub fn nullspace(m: &PolyMatrix, ctx: &PivotContext) -> Result<Vec<Vec<Poly>>, LinalgError> {
    if m.is_constant() {
        let basis = rational_nullspace(&to_rational_rows(m), m.cols());
        return Ok(basis.into_iter().map(|v| normalize_vector(v.into_iter().map(Poly::constant).collect(), &[])).collect());
    }
    let ech = echelon(m, ctx)?;
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &c in &ech.pivot_cols {
        is_pivot[c] = true;
    }
    let mut scalers: Vec<Poly> = ech.rows.iter().zip(&ech.pivot_cols).map(|(row, &c)| row[c].clone()).collect();
    scalers.extend(ctx.nonvanishing.iter().cloned());
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Poly::zero(); cols];
        v[free] = Poly::one();
        for (row, &pc) in ech.rows.iter().zip(&ech.pivot_cols).rev() {
            let s: Poly = row
                .iter()
                .enumerate()
                .filter(|(k, a)| *k != pc && !a.is_zero() && !v[*k].is_zero())
                .map(|(k, a)| a.mul_ref(&v[k]))
                .sum();
            if s.is_zero() {
                continue;
            }
            let piv = &row[pc];
            match (-&s).div_exact(piv) {
                Some(q) => v[pc] = q,
                None => {
                    for x in v.iter_mut() {
                        *x = x.mul_ref(piv);
                    }
                    v[pc] = -s;
                }
            }
        }
        basis.push(normalize_vector(v, &scalers));
    }
    Ok(basis)
}

/// A basis of the row space, each vector normalized.
pub fn row_basis(m: &PolyMatrix, ctx: &PivotContext) -> Result<Vec<Vec<Poly>>, LinalgError> {
    if m.is_constant() {
        let (rref, _) = rational_rref(&to_rational_rows(m));
        return Ok(rref.into_iter().map(|r| normalize_vector(r.into_iter().map(Poly::constant).collect(), &[])).collect());
    }
    let ech = echelon(m, ctx)?;
    Ok(ech.rows.into_iter().map(|r| normalize_vector(r, &ctx.nonvanishing)).collect())
}

/// Coordinate-monomial coefficient rows of `polys` over a shared column set.
/// Coefficients are polynomials in the remaining (parameter) variables.
pub fn coefficient_matrix(polys: &[Poly]) -> (PolyMatrix, Vec<Monomial>) {
    let grouped: Vec<BTreeMap<Monomial, Poly>> = polys.iter().map(|p| p.coefficients_by(|v| v.is_coord())).collect();
    let cols: Vec<Monomial> = grouped.iter().flat_map(|g| g.keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
    let index: BTreeMap<&Monomial, usize> = cols.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut m = PolyMatrix::with_cols(cols.len());
    for g in grouped {
        let mut row = vec![Poly::zero(); cols.len()];
        for (mono, c) in g {
            row[index[&mono]] = c;
        }
        m.push_row(row);
    }
    (m, cols)
}

/// A basis of the span of `polys`, treating coordinate monomials as the basis
/// of the ambient space and parameters as scalars.
pub fn poly_span_basis(polys: &[Poly], ctx: &PivotContext) -> Result<Vec<Poly>, LinalgError> {
    let nonzero: Vec<Poly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(Vec::new());
    }
    let (m, cols) = coefficient_matrix(&nonzero);
    let rows = row_basis(&m, ctx)?;
    Ok(rows
        .into_iter()
        .map(|row| row.iter().zip(&cols).filter(|(c, _)| !c.is_zero()).map(|(c, mono)| c.mul_monomial(mono, &Rational::one())).sum())
        .collect())
}

pub fn poly_span_dim(polys: &[Poly], ctx: &PivotContext) -> Result<usize, LinalgError> {
    let nonzero: Vec<Poly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(0);
    }
    rank(&coefficient_matrix(&nonzero).0, ctx)
}

/// Membership of `p` in the span of `basis`, by comparing ranks.
pub fn poly_in_span(p: &Poly, basis: &[Poly], ctx: &PivotContext) -> Result<bool, LinalgError> {
    if p.is_zero() {
        return Ok(true);
    }
    let mut all = basis.to_vec();
    let before = poly_span_dim(&all, ctx)?;
    all.push(p.clone());
    Ok(poly_span_dim(&all, ctx)? == before)
}

/// Strips common polynomial factors among `candidates`, common monomials and
/// rational content; makes the first nonzero entry's leading coefficient positive.
pub fn normalize_vector(mut v: Vec<Poly>, candidates: &[Poly]) -> Vec<Poly> {
    if v.iter().all(Poly::is_zero) {
        return v;
    }
    for f in candidates.iter().filter(|f| !f.is_constant()) {
        loop {
            let divided: Option<Vec<Poly>> = v.iter().map(|x| x.div_exact(f)).collect();
            match divided {
                Some(d) => v = d,
                None => break,
            }
        }
    }
    // common monomial factor
    let mut g: Option<super::monomial::Monomial> = None;
    for x in v.iter().filter(|x| !x.is_zero()) {
        for (m, _) in x.terms() {
            g = Some(match g {
                None => m.clone(),
                Some(h) => h.gcd(m),
            });
        }
    }
    if let Some(g) = g.filter(|g| !g.is_one()) {
        let sigma_div = |x: &Poly| {
            Poly::from_terms(x.terms().iter().map(|(m, c)| (m.div(&g).expect("gcd divides"), c.clone())))
        };
        v = v.iter().map(sigma_div).collect();
    }
    let all_terms: Vec<_> = v.iter().flat_map(|x| x.terms().iter().cloned()).collect();
    let lead_sign_neg = v.iter().find(|x| !x.is_zero()).and_then(|x| x.leading_term()).is_some_and(|(_, c)| c.is_negative());
    let mut content = Poly::from_terms(all_terms.into_iter().enumerate().map(|(k, (_, c))| {
        // distinct dummy monomials so coefficients are not merged
        (super::monomial::Monomial::var(super::monomial::Var::Param(super::monomial::Param::Coeff(k as u32))), c)
    }))
    .content()
    .abs();
    if lead_sign_neg {
        content = -content;
    }
    let inv = content.recip().expect("nonzero");
    v.iter().map(|x| x.scale(&inv)).collect()
}

fn to_rational_rows(m: &PolyMatrix) -> Vec<Vec<Rational>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|p| p.as_constant().expect("constant matrix")).collect())
        .collect()
}

/// Reduced row echelon form over ℚ; returns the nonzero rows and their pivot columns.
pub fn rational_rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a: Vec<Vec<Rational>> = rows.iter().filter(|r| r.iter().any(|c| !c.is_zero())).cloned().collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip().expect("nonzero");
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rational_nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let (rref, pivots) = rational_rref(rows);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &pc) in rref.iter().zip(&pivots) {
                v[pc] = -&row[free];
            }
            v
        })
        .collect()
}

pub fn rational_inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (rref, pivots) = rational_rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(rref.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &PolyMatrix) -> Poly {
    assert_eq!(m.rows(), m.cols(), "square matrix required");
    let n = m.rows();
    let mut a = m.row_vecs();
    let mut prev = Poly::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| (a[i][k].total_degree(), a[i][k].len())) else {
            return Poly::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k].mul_ref(&a[i][j]).sub_ref(&a[i][k].mul_ref(&a[k][j]));
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    if negate {
        -prev
    } else {
        prev
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::monomial::Param;

    fn c(n: i64) -> Poly {
        Poly::int(n)
    }
    fn lambda() -> Poly {
        Poly::param(Param::Lambda)
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        let m = PolyMatrix::identity(3);
        assert!(nullspace(&m, &PivotContext::default()).unwrap().is_empty());
    }

    #[test]
    fn one_relation() {
        let m = PolyMatrix::from_rows(vec![vec![c(1), c(1)]]);
        let ns = nullspace(&m, &PivotContext::default()).unwrap();
        assert_eq!(ns, vec![vec![c(1), c(-1)]]);
    }

    #[test]
    fn parametric_cross_multiplication() {
        let m = PolyMatrix::from_rows(vec![vec![&lambda() - &c(1), c(-1)]]);
        let ns = nullspace(&m, &PivotContext::default()).unwrap();
        assert_eq!(ns, vec![vec![c(1), &lambda() - &c(1)]]);
    }

    #[test]
    fn strict_policy_reports_undecided_pivot() {
        let m = PolyMatrix::from_rows(vec![vec![&lambda() - &c(1)]]);
        let err = nullspace(&m, &PivotContext::default()).unwrap_err();
        assert!(matches!(err, LinalgError::UndecidedPivot { .. }));
        assert!(nullspace(&m, &PivotContext::generic()).unwrap().is_empty());
        let declared = PivotContext::strict(vec![&lambda() - &c(1)]);
        assert!(nullspace(&m, &declared).unwrap().is_empty());
    }

    #[test]
    fn parametric_nullspace_annihilates() {
        let l = lambda();
        let m = PolyMatrix::from_rows(vec![
            vec![l.clone(), c(1), c(0), &l * &l],
            vec![c(0), l.clone(), c(1), c(2)],
            vec![l.clone(), &l + &c(1), c(1), &(&l * &l) + &c(2)],
        ]);
        let ns = nullspace(&m, &PivotContext::generic()).unwrap();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Poly::is_zero));
        }
    }

    #[test]
    fn inverse_and_det() {
        let m = vec![
            vec![Rational::from_int(2), Rational::from_int(1)],
            vec![Rational::from_int(1), Rational::from_int(1)],
        ];
        let inv = rational_inverse(&m).unwrap();
        assert_eq!(inv[0][0], Rational::from_int(1));
        assert_eq!(inv[0][1], Rational::from_int(-1));
        assert_eq!(inv[1][1], Rational::from_int(2));
        let singular = vec![vec![Rational::from_int(1), Rational::from_int(2)], vec![Rational::from_int(2), Rational::from_int(4)]];
        assert!(rational_inverse(&singular).is_none());

        let l = lambda();
        let pm = PolyMatrix::from_rows(vec![vec![l.clone(), c(1)], vec![c(1), l.clone()]]);
        assert_eq!(determinant(&pm), &(&l * &l) - &c(1));
    }
}
