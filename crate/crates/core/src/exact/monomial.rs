use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use super::ParseError;

/// Named scalar parameters. The derived order is the global variable order
/// used by the term ordering: parameters sort before coordinates, and among
/// parameters in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    /// The family parameter λ.
    Lambda,
    /// Stand-in for 1/λ, paired with the relation λμ = 1.
    Mu,
    Xi1,
    Xi2,
    /// Automorphism matrix parameter α_index; `copy` distinguishes independent
    /// copies when composing branches.
    Alpha { index: u8, copy: u8 },
    /// One-parameter subgroup parameters of diagonal families: `which` 0 is α, 1 is β.
    Diag { which: u8, copy: u8 },
    /// Structure constant M_{ijl} of a generic table (1-based indices).
    Struct { i: u8, j: u8, l: u8 },
    /// Undetermined coefficient c_k of a generic polynomial.
    Coeff(u32),
}

impl Param {
    pub fn alpha(index: u8) -> Self {
        Param::Alpha { index, copy: 0 }
    }

    /// True for parameters that describe the algebra itself (λ and its
    /// companions) rather than points of a group or unknown coefficients.
    pub fn is_field_param(&self) -> bool {
        matches!(self, Param::Lambda | Param::Mu | Param::Xi1 | Param::Xi2)
    }

    pub fn name(&self) -> String {
        match *self {
            Param::Lambda => "lambda".into(),
            Param::Mu => "mu".into(),
            Param::Xi1 => "xi1".into(),
            Param::Xi2 => "xi2".into(),
            Param::Alpha { index, copy: 0 } => format!("a{index}"),
            Param::Alpha { index, copy } => format!("a{index}_{copy}"),
            Param::Diag { which, copy } => {
                let base = if which == 0 { "alpha" } else { "beta" };
                if copy == 0 {
                    base.into()
                } else {
                    format!("{base}_{copy}")
                }
            }
            Param::Struct { i, j, l } => format!("m_{i}_{j}_{l}"),
            Param::Coeff(k) => format!("c_{k}"),
        }
    }

    fn pretty(&self) -> String {
        match *self {
            Param::Lambda => "λ".into(),
            Param::Mu => "μ".into(),
            Param::Xi1 => "ξ1".into(),
            Param::Xi2 => "ξ2".into(),
            Param::Diag { which: 0, copy: 0 } => "α".into(),
            Param::Diag { which: 1, copy: 0 } => "β".into(),
            _ => self.name(),
        }
    }
}

impl FromStr for Param {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Var(s.to_string());
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        let small = |t: &str| t.parse::<u8>().map_err(|_| bad());
        Ok(match s {
            "lambda" => Param::Lambda,
            "mu" => Param::Mu,
            "xi1" => Param::Xi1,
            "xi2" => Param::Xi2,
            "alpha" => Param::Diag { which: 0, copy: 0 },
            "beta" => Param::Diag { which: 1, copy: 0 },
            _ => {
                if let Some(rest) = s.strip_prefix("alpha_") {
                    Param::Diag { which: 0, copy: small(rest)? }
                } else if let Some(rest) = s.strip_prefix("beta_") {
                    Param::Diag { which: 1, copy: small(rest)? }
                } else if let Some(rest) = s.strip_prefix("m_") {
                    let parts: Vec<&str> = rest.split('_').collect();
                    if parts.len() != 3 {
                        return Err(bad());
                    }
                    Param::Struct { i: small(parts[0])?, j: small(parts[1])?, l: small(parts[2])? }
                } else if let Some(rest) = s.strip_prefix("c_") {
                    Param::Coeff(num(rest)?)
                } else if let Some(rest) = s.strip_prefix('a') {
                    match rest.split_once('_') {
                        Some((k, c)) => Param::Alpha { index: small(k)?, copy: small(c)? },
                        None => Param::Alpha { index: small(rest)?, copy: 0 },
                    }
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

/// A polynomial variable: either a named parameter or the coordinate
/// function x_{copy,index} (both 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Param(Param),
    Coord { copy: u16, index: u16 },
}

impl Var {
    pub fn coord(copy: usize, index: usize) -> Self {
        assert!(copy >= 1 && index >= 1, "coordinate indices are 1-based");
        Var::Coord { copy: copy as u16, index: index as u16 }
    }

    pub fn is_coord(&self) -> bool {
        matches!(self, Var::Coord { .. })
    }

    pub fn param(&self) -> Option<Param> {
        match self {
            Var::Param(p) => Some(*p),
            Var::Coord { .. } => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Var::Param(p) => p.name(),
            Var::Coord { copy, index } => format!("x_{copy}_{index}"),
        }
    }

    /// Short human name: x_r, y_r, z_r for three-dimensional coordinates,
    /// Greek letters for λ, μ, ξ.
    pub fn pretty(&self, shorthand: bool) -> String {
        match self {
            Var::Param(p) => p.pretty(),
            Var::Coord { copy, index } if shorthand && *index <= 3 => {
                let letter = ["x", "y", "z"][*index as usize - 1];
                format!("{letter}_{copy}")
            }
            Var::Coord { copy, index } => format!("x_{copy}_{index}"),
        }
    }
}

impl From<Param> for Var {
    fn from(p: Param) -> Self {
        Var::Param(p)
    }
}

impl FromStr for Var {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("x_") {
            let (r, i) = rest.split_once('_').ok_or_else(|| ParseError::Var(s.into()))?;
            let r: u16 = r.parse().map_err(|_| ParseError::Var(s.into()))?;
            let i: u16 = i.parse().map_err(|_| ParseError::Var(s.into()))?;
            if r == 0 || i == 0 {
                return Err(ParseError::Var(s.into()));
            }
            return Ok(Var::Coord { copy: r, index: i });
        }
        s.parse::<Param>().map(Var::Param)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Power product of variables, stored sparsely and sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: Var, e: u32) -> Self {
        let mut sv = SmallVec::new();
        if e > 0 {
            sv.push((v, e));
        }
        Monomial(sv)
    }

    /// Builds a monomial from arbitrary (var, exponent) pairs, merging repeats.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut v: SmallVec<[(Var, u32); 4]> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_by_key(|a| a.0);
        let mut out: SmallVec<[(Var, u32); 4]> = SmallVec::with_capacity(v.len());
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|p| p.0 == v).map_or(0, |p| p.1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|p| p.0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let d = other.0[j].1;
                if d > e {
                    return None;
                }
                if e > d {
                    out.push((v, e - d));
                }
                j += 1;
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).is_some()
    }

    /// Splits into the part over variables satisfying `pred` and the rest.
    pub fn split<F: Fn(Var) -> bool>(&self, pred: F) -> (Monomial, Monomial) {
        let mut yes = SmallVec::new();
        let mut no = SmallVec::new();
        for &p in &self.0 {
            if pred(p.0) {
                yes.push(p);
            } else {
                no.push(p);
            }
        }
        (Monomial(yes), Monomial(no))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|&(v, e)| {
                    let f = other.exponent(v);
                    (f > 0).then(|| (v, e.min(f)))
                })
                .collect(),
        )
    }

    /// Per-copy degrees of the coordinate variables, for copies 1..=m.
    pub fn multidegree(&self, m: usize) -> Vec<u32> {
        let mut d = vec![0; m];
        for &(v, e) in &self.0 {
            if let Var::Coord { copy, .. } = v {
                let c = copy as usize;
                if c >= 1 && c <= m {
                    d[c - 1] += e;
                }
            }
        }
        d
    }

    /// Rename variables; the map must be injective on this monomial's
    /// support or exponents are merged.
    pub fn map_vars<F: Fn(Var) -> Var>(&self, f: F) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order over the global variable order.
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a.0 != b.0 {
                // the earlier variable is present in `a` only
                return if a.0 < b.0 { Ordering::Greater } else { Ordering::Less };
            }
            if a.1 != b.1 {
                return a.1.cmp(&b.1);
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.name() } else { format!("{}^{}", v.name(), e) })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(r: usize, i: usize) -> Var {
        Var::coord(r, i)
    }

    #[test]
    fn names_round_trip() {
        let vars = [
            Var::Param(Param::Lambda),
            Var::Param(Param::Mu),
            Var::Param(Param::Xi2),
            Var::Param(Param::alpha(5)),
            Var::Param(Param::Alpha { index: 6, copy: 1 }),
            Var::Param(Param::Diag { which: 1, copy: 0 }),
            Var::Param(Param::Struct { i: 1, j: 2, l: 3 }),
            Var::Param(Param::Coeff(17)),
            x(2, 3),
        ];
        for v in vars {
            assert_eq!(v.name().parse::<Var>().unwrap(), v, "{}", v.name());
        }
        assert!("x_0_1".parse::<Var>().is_err());
        assert!("gamma".parse::<Var>().is_err());
    }

    #[test]
    fn params_order_before_coordinates() {
        assert!(Var::Param(Param::Coeff(1000)) < x(1, 1));
        assert!(x(1, 3) < x(2, 1));
        assert!(Var::Param(Param::Lambda) < Var::Param(Param::Mu));
    }

    #[test]
    fn graded_lex() {
        let a = Monomial::power(x(1, 1), 2);
        let b = Monomial::from_pairs([(x(1, 1), 1), (x(1, 2), 1)]);
        let c = Monomial::var(x(1, 3));
        assert!(a > b);
        assert!(b > c);
        assert!(Monomial::var(x(1, 1)) > Monomial::var(x(1, 2)));
        assert!(c > Monomial::one());
    }

    #[test]
    fn mul_div() {
        let a = Monomial::from_pairs([(x(1, 1), 2), (x(2, 3), 1)]);
        let b = Monomial::from_pairs([(x(1, 1), 1)]);
        let ab = a.mul(&b);
        assert_eq!(ab.exponent(x(1, 1)), 3);
        assert_eq!(ab.div(&b).unwrap(), a);
        assert!(b.div(&a).is_none());
        assert_eq!(a.multidegree(2), vec![2, 1]);
        assert_eq!(a.gcd(&b), b);
    }
}
