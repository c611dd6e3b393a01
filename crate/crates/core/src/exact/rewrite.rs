use super::monomial::{Monomial, Param, Var};
use super::poly::{Poly, Substitution};
use super::rational::Rational;
use super::RewriteError;

/// A terminating set of polynomial rewrite rules.
///
/// Elimination rules replace a variable outright; their right-hand sides may
/// not mention any eliminated variable. Reduction rules replace a monomial by
/// a polynomial whose terms are all strictly smaller in the graded-lex order,
/// so reduction terminates by well-foundedness of the order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RewriteSystem {
    eliminations: Vec<(Var, Poly)>,
    reductions: Vec<(Monomial, Poly)>,
}

impl RewriteSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.eliminations.is_empty() && self.reductions.is_empty()
    }

    pub fn eliminate(mut self, var: Var, replacement: Poly) -> Result<Self, RewriteError> {
        if self.eliminations.iter().any(|(v, _)| *v == var) {
            return Err(RewriteError::DuplicateElimination(var.name()));
        }
        let mut eliminated: Vec<Var> = self.eliminations.iter().map(|(v, _)| *v).collect();
        eliminated.push(var);
        let mentions = |p: &Poly| p.vars().into_iter().find(|v| eliminated.contains(v));
        if let Some(v) = mentions(&replacement) {
            return Err(RewriteError::NotEliminating(v.name()));
        }
        let existing = self.eliminations.iter().map(|(_, p)| p).chain(self.reductions.iter().map(|(_, p)| p));
        for rhs in existing {
            if let Some(v) = mentions(rhs) {
                return Err(RewriteError::NotEliminating(v.name()));
            }
        }
        self.eliminations.push((var, replacement));
        Ok(self)
    }

    /// `var^threshold ↦ replacement`.
    pub fn power_rule(self, var: Var, threshold: u32, replacement: Poly) -> Result<Self, RewriteError> {
        if threshold == 0 {
            return Err(RewriteError::NotDecreasing("zero threshold".into()));
        }
        self.monomial_rule(Monomial::power(var, threshold), replacement)
    }

    pub fn monomial_rule(mut self, lhs: Monomial, replacement: Poly) -> Result<Self, RewriteError> {
        if lhs.is_one() {
            return Err(RewriteError::NotDecreasing("constant left-hand side".into()));
        }
        if replacement.terms().iter().any(|(m, _)| *m >= lhs) {
            return Err(RewriteError::NotDecreasing(format!("{lhs:?}")));
        }
        if let Some(v) = replacement.vars().into_iter().find(|v| self.eliminations.iter().any(|(e, _)| e == v)) {
            return Err(RewriteError::NotEliminating(v.name()));
        }
        self.reductions.push((lhs, replacement));
        Ok(self)
    }

    /// ξ₂ ↦ −1 − ξ₁ and ξ₁² ↦ λ − ξ₁: the relations ξ₁ + ξ₂ = −1 and
    /// ξ₁ξ₂ = −λ for the two roots of t² + t − λ.
    pub fn xi_relations() -> Self {
        let xi1 = Poly::param(Param::Xi1);
        let lambda = Poly::param(Param::Lambda);
        RewriteSystem::new()
            .eliminate(Var::Param(Param::Xi2), &Poly::int(-1) - &xi1)
            .and_then(|r| r.power_rule(Var::Param(Param::Xi1), 2, &lambda - &xi1))
            .expect("bundled rules are valid")
    }

    /// λμ ↦ 1.
    pub fn laurent_lambda() -> Self {
        let lhs = Monomial::from_pairs([(Var::Param(Param::Lambda), 1), (Var::Param(Param::Mu), 1)]);
        RewriteSystem::new().monomial_rule(lhs, Poly::one()).expect("bundled rules are valid")
    }

    pub fn merged(&self, other: &RewriteSystem) -> Result<Self, RewriteError> {
        let mut out = self.clone();
        for (v, p) in &other.eliminations {
            out = out.eliminate(*v, p.clone())?;
        }
        for (m, p) in &other.reductions {
            out = out.monomial_rule(m.clone(), p.clone())?;
        }
        Ok(out)
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        if self.is_empty() {
            return p.clone();
        }
        let sigma: Substitution = self.eliminations.iter().cloned().collect();
        let mut current = p.substitute(&sigma);
        if self.reductions.is_empty() {
            return current;
        }
        let mut done: Vec<(Monomial, Rational)> = Vec::new();
        // peel terms from the top; reducible ones are rewritten in place
        loop {
            let Some((m, c)) = current.leading_term().map(|(m, c)| (m.clone(), c.clone())) else {
                break;
            };
            let head = Poly::term(m.clone(), c.clone());
            let rule = self.reductions.iter().find_map(|(lhs, rhs)| m.div(lhs).map(|q| (q, rhs)));
            match rule {
                Some((quot, rhs)) => {
                    let replacement = rhs.mul_monomial(&quot, &c);
                    current = current.sub_ref(&head).add_ref(&replacement);
                }
                None => {
                    done.push((m, c));
                    current = current.sub_ref(&head);
                }
            }
        }
        Poly::from_terms(done)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi1() -> Poly {
        Poly::param(Param::Xi1)
    }
    fn xi2() -> Poly {
        Poly::param(Param::Xi2)
    }
    fn lambda() -> Poly {
        Poly::param(Param::Lambda)
    }

    #[test]
    fn xi_product_and_sum() {
        let rw = RewriteSystem::xi_relations();
        assert_eq!(rw.normal_form(&(&xi1() * &xi2())), -lambda());
        assert_eq!(rw.normal_form(&(&xi1() + &xi2())), Poly::int(-1));
    }

    #[test]
    fn xi_cubed() {
        let rw = RewriteSystem::xi_relations();
        let expected = &(&(&lambda() + &Poly::one()) * &xi1()) - &lambda();
        assert_eq!(rw.normal_form(&xi1().pow(3)), expected);
    }

    #[test]
    fn laurent() {
        let rw = RewriteSystem::laurent_lambda();
        let mu = Poly::param(Param::Mu);
        let p = &(&lambda().pow(3) * &mu.pow(2)) + &mu;
        assert_eq!(rw.normal_form(&p), &lambda() + &mu);
    }

    #[test]
    fn rejects_non_terminating() {
        let v = Var::Param(Param::Xi1);
        assert!(RewriteSystem::new().power_rule(v, 2, xi1().pow(3)).is_err());
        let cyc = RewriteSystem::new().eliminate(v, xi1());
        assert!(cyc.is_err());
        let chained = RewriteSystem::new()
            .eliminate(Var::Param(Param::Xi2), xi1())
            .and_then(|r| r.eliminate(v, xi2()));
        assert!(chained.is_err());
    }
}
