use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::{Monomial, Param, Var};
use super::rational::Rational;

/// Sparse multivariate polynomial over ℚ.
///
/// Terms are kept sorted by decreasing graded-lex monomial order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Rational)>,
}

/// Simultaneous substitution; variables not in the map are left alone.
pub type Substitution = BTreeMap<Var, Poly>;

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_int(n))
    }

    pub fn var(v: impl Into<Var>) -> Self {
        Self::term(Monomial::var(v.into()), Rational::one())
    }

    pub fn param(p: Param) -> Self {
        Self::var(Var::Param(p))
    }

    pub fn coord(copy: usize, index: usize) -> Self {
        Self::var(Var::coord(copy, index))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Canonicalizes an arbitrary term list (merges duplicates, drops zeros).
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(e) => *e += &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_sorted_map(acc)
    }

    fn from_sorted_map(acc: BTreeMap<Monomial, Rational>) -> Self {
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The value of a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map_or_else(Rational::zero, |(_, c)| c.clone())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|(m, _)| m.vars()).collect()
    }

    pub fn has_coords(&self) -> bool {
        self.terms.iter().any(|(m, _)| m.vars().any(|v| v.is_coord()))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        // multiplying by a monomial preserves the term order
        Poly { terms: self.terms.iter().map(|(t, k)| (t.mul(m), k * c)).collect() }
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly { terms: out }
    }

    pub fn add_ref(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub_ref(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    pub fn mul_ref(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_monomial(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e += &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, Rational)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Simultaneous substitution of variables by polynomials.
    pub fn substitute(&self, sigma: &Substitution) -> Poly {
        if sigma.is_empty() {
            return self.clone();
        }
        let mut powers: HashMap<(Var, u32), Poly> = HashMap::new();
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut image = Poly::constant(c.clone());
            for (v, e) in m.iter() {
                match sigma.get(&v) {
                    Some(p) => {
                        let pw = powers.entry((v, e)).or_insert_with(|| p.pow(e));
                        image = image.mul_ref(pw);
                    }
                    None => kept.push((v, e)),
                }
            }
            let kept = Monomial::from_pairs(kept);
            for (t, k) in image.terms {
                let t = t.mul(&kept);
                match acc.get_mut(&t) {
                    Some(x) => *x += &k,
                    None => {
                        acc.insert(t, k);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, Rational)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    /// Substitute rational values for some variables.
    pub fn evaluate(&self, values: &BTreeMap<Var, Rational>) -> Poly {
        let sigma: Substitution = values.iter().map(|(v, r)| (*v, Poly::constant(r.clone()))).collect();
        self.substitute(&sigma)
    }

    pub fn map_vars<F: Fn(Var) -> Var>(&self, f: F) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())))
    }

    /// Groups terms by their monomial over the variables selected by `pred`;
    /// each group's coefficient is a polynomial in the remaining variables.
    pub fn coefficients_by<F: Fn(Var) -> bool>(&self, pred: F) -> BTreeMap<Monomial, Poly> {
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (key, rest) = m.split(&pred);
            groups.entry(key).or_default().push((rest, c.clone()));
        }
        groups.into_iter().map(|(k, ts)| (k, Poly::from_terms(ts))).collect()
    }

    /// True if every term has the same coordinate multidegree `d` (copies 1..=m).
    pub fn is_homogeneous_of(&self, d: &[u32]) -> bool {
        self.terms.iter().all(|(m, _)| m.multidegree(d.len()) == d)
    }

    /// Exact division: `Some(q)` with `self = q * divisor`, or `None`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading_term()?;
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()?));
        }
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm)?;
            let qc = c / lc;
            rem = rem.sub_ref(&divisor.mul_monomial(&qm, &qc));
            quotient.push((qm, qc));
        }
        Some(Poly::from_terms(quotient))
    }

    /// Rational content: the positive rational `c` such that `self / c` has
    /// coprime integer coefficients with a positive leading coefficient
    /// (sign folded into `c`).
    pub fn content(&self) -> Rational {
        use num_integer::Integer;
        use num_bigint::BigInt;
        use num_traits::{One, Zero};
        if self.is_zero() {
            return Rational::one();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let mut content = Rational::from_bigints(num, den);
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        content
    }

    /// Divides out the rational content.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        self.scale(&c.recip().expect("content is nonzero"))
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&c.recip().expect("nonzero")),
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn display(&self) -> PolyDisplay<'_> {
        PolyDisplay { poly: self, shorthand: false }
    }

    /// Renders x_{r,1..3} as x_r, y_r, z_r.
    pub fn display_short(&self) -> PolyDisplay<'_> {
        PolyDisplay { poly: self, shorthand: true }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    shorthand: bool,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let factors: Vec<String> = m
                .iter()
                .map(|(v, e)| {
                    let n = v.pretty(self.shorthand);
                    if e == 1 {
                        n
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&factors.join("·"))?;
            } else {
                write!(f, "{abs}·{}", factors.join("·"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display().fmt(f)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.display())
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::int(n)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl From<Param> for Poly {
    fn from(p: Param) -> Self {
        Poly::param(p)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<'a> $tr<&'a Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                self.$inner(rhs)
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$inner(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                self.$inner(rhs)
            }
        }
        impl<'a> $tr<Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$inner(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, add_ref);
poly_binop!(Sub, sub, sub_ref);
poly_binop!(Mul, mul, mul_ref);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |a, b| a + b)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: Rational,
    monomial: BTreeMap<String, u32>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                coeff: c.clone(),
                monomial: m.iter().map(|(v, e)| (v.name(), e)).collect(),
            })
            .collect();
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        // term list, or a bare rational constant as shorthand
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Terms(Vec<TermRepr>),
            Int(i64),
            Text(String),
        }
        let terms = match Repr::deserialize(deserializer)? {
            Repr::Terms(ts) => ts,
            Repr::Int(n) => return Ok(Poly::int(n)),
            Repr::Text(s) => {
                let c: Rational = s.parse().map_err(serde::de::Error::custom)?;
                return Ok(Poly::constant(c));
            }
        };
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let mut pairs = Vec::with_capacity(t.monomial.len());
            for (name, e) in t.monomial {
                let v: Var = name.parse().map_err(serde::de::Error::custom)?;
                pairs.push((v, e));
            }
            out.push((Monomial::from_pairs(pairs), t.coeff));
        }
        Ok(Poly::from_terms(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(r: usize) -> Poly {
        Poly::coord(r, 1)
    }
    fn z(r: usize) -> Poly {
        Poly::coord(r, 3)
    }

    #[test]
    fn difference_of_squares() {
        let p = (&x(1) + &z(1)) * (&x(1) - &z(1));
        let expected = x(1).pow(2) - z(1).pow(2);
        assert_eq!(p, expected);
    }

    #[test]
    fn zero_absorbs() {
        let p = (&x(1) + &z(2)).pow(3);
        assert!((Poly::zero() * p).is_zero());
    }

    #[test]
    fn additive_inverse() {
        let a = &x(1) * &z(2) - &z(1) * &x(2);
        let b = &z(1) * &x(2) - &x(1) * &z(2);
        assert!((a + b).is_zero());
    }

    #[test]
    fn l3_bilinear_invariant_under_shear() {
        // x_r -> x_r + a3 z_r leaves x1 z2 - z1 x2 fixed
        let a3 = Poly::param(Param::alpha(3));
        let p = &x(1) * &z(2) - &z(1) * &x(2);
        let mut sigma = Substitution::new();
        for r in 1..=2 {
            sigma.insert(Var::coord(r, 1), &x(r) + &(&a3 * &z(r)));
            sigma.insert(Var::coord(r, 3), z(r));
        }
        assert_eq!(p.substitute(&sigma), p);
    }

    #[test]
    fn identity_and_row_substitution() {
        let mut sigma = Substitution::new();
        sigma.insert(Var::coord(1, 3), z(1));
        assert_eq!(z(1).substitute(&sigma), z(1));

        let a1 = Poly::param(Param::alpha(1));
        let a4 = Poly::param(Param::alpha(4));
        let y1 = Poly::coord(1, 2);
        let image = &(&a4 * &x(1)) + &(&(&a1 + &a4) * &y1);
        let mut sigma = Substitution::new();
        sigma.insert(Var::coord(1, 2), image.clone());
        assert_eq!(y1.substitute(&sigma), image);
    }

    #[test]
    fn exact_division() {
        let l = Poly::param(Param::Lambda);
        let a = &l - &Poly::one();
        let b = &l + &Poly::int(2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(b.div_exact(&a).is_none());
        assert_eq!(Poly::zero().div_exact(&a).unwrap(), Poly::zero());
    }

    #[test]
    fn content_and_primitive() {
        let p = Poly::from_terms([
            (Monomial::var(Var::coord(1, 1)), Rational::new(-2, 3)),
            (Monomial::one(), Rational::new(4, 9)),
        ]);
        assert_eq!(p.content(), Rational::new(-2, 9));
        let q = p.primitive();
        assert_eq!(q.to_string(), "3·x_1_1 - 2");
    }

    #[test]
    fn display_shorthand() {
        let p = (&z(1) * &z(2)).scale(&Rational::from_int(5));
        assert_eq!(p.display_short().to_string(), "5·z_1·z_2");
        let q = &(&Poly::param(Param::Lambda) * &z(1)) - &z(1);
        assert_eq!(q.display_short().to_string(), "λ·z_1 - z_1");
    }

    #[test]
    fn json_shape() {
        let p = &(&x(1).pow(2) * &Poly::param(Param::Lambda)) - &Poly::constant(Rational::new(1, 2));
        let js = serde_json::to_value(&p).unwrap();
        assert_eq!(
            js,
            serde_json::json!([
                {"coeff": "1", "monomial": {"lambda": 1, "x_1_1": 2}},
                {"coeff": "-1/2", "monomial": {}}
            ])
        );
        let back: Poly = serde_json::from_value(js).unwrap();
        assert_eq!(back, p);
        let c: Poly = serde_json::from_str("\"-2/3\"").unwrap();
        assert_eq!(c, Poly::constant(Rational::new(-2, 3)));
        let k: Poly = serde_json::from_str("3").unwrap();
        assert_eq!(k, Poly::int(3));
    }
}
