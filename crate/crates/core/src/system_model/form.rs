use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use super::poly::Polynomial;
use super::var::VarRef;
use crate::rational::{self, Rational};

/// Sparse symmetric quadratic form `Σ c · x · y` over jet variables.
///
/// Keys are sorted pairs and zero coefficients are never stored, so two
/// forms are equal iff they are equal as polynomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    terms: BTreeMap<(VarRef, VarRef), Rational>,
}

fn key(x: VarRef, y: VarRef) -> (VarRef, VarRef) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

impl QuadraticForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, x: VarRef, y: VarRef, c: Rational) {
        if c.is_zero() {
            return;
        }
        let k = key(x, y);
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn with_term(mut self, x: VarRef, y: VarRef, c: Rational) -> Self {
        self.add_term(x, y, c);
        self
    }

    pub fn coeff(&self, x: VarRef, y: VarRef) -> Rational {
        self.terms.get(&key(x, y)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VarRef, &VarRef, &Rational)> {
        self.terms.iter().map(|((x, y), c)| (x, y, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_form(&mut self, other: &QuadraticForm) {
        self.add_scaled(other, &rational::one());
    }

    pub fn add_scaled(&mut self, other: &QuadraticForm, s: &Rational) {
        for (x, y, c) in other.terms() {
            self.add_term(*x, *y, c * s);
        }
    }

    pub fn sub(&self, other: &QuadraticForm) -> QuadraticForm {
        let mut out = self.clone();
        out.add_scaled(other, &rational::int(-1));
        out
    }

    pub fn scaled(&self, s: &Rational) -> QuadraticForm {
        let mut out = QuadraticForm::new();
        out.add_scaled(self, s);
        out
    }

    /// Keep only the terms for which `keep(x, y)` holds.
    pub fn filter(&self, mut keep: impl FnMut(&VarRef, &VarRef) -> bool) -> QuadraticForm {
        QuadraticForm {
            terms: self
                .terms
                .iter()
                .filter(|((x, y), _)| keep(x, y))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn vars(&self) -> BTreeSet<VarRef> {
        self.terms.keys().flat_map(|(x, y)| [*x, *y]).collect()
    }

    pub fn max_component(&self) -> usize {
        self.vars().iter().map(|v| v.component).max().unwrap_or(0)
    }

    pub fn has_second_derivatives(&self) -> bool {
        self.vars().iter().any(|v| v.order() == 2)
    }

    pub fn map_vars(&self, mut f: impl FnMut(&VarRef) -> VarRef) -> QuadraticForm {
        let mut out = QuadraticForm::new();
        for (x, y, c) in self.terms() {
            out.add_term(f(x), f(y), c.clone());
        }
        out
    }

    pub fn eval(&self, mut value: impl FnMut(&VarRef) -> f64) -> f64 {
        self.terms().map(|(x, y, c)| rational::to_f64(c) * value(x) * value(y)).sum()
    }

    pub fn eval_exact(&self, mut value: impl FnMut(&VarRef) -> Rational) -> Rational {
        let mut acc = Rational::zero();
        for (x, y, c) in self.terms() {
            acc += c * value(x) * value(y);
        }
        acc
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let mut p = Polynomial::zero();
        for (x, y, c) in self.terms() {
            p.add_monomial(vec![*x, *y], c.clone());
        }
        p
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn swapped_insertion_accumulates() {
        let x = VarRef::first(1, 0);
        let y = VarRef::value(2);
        let f = QuadraticForm::new().with_term(x, y, int(3)).with_term(y, x, int(3));
        assert_eq!(f.len(), 1);
        assert_eq!(f.coeff(x, y), int(6));
    }

    #[test]
    fn cancellation_removes_key() {
        let x = VarRef::value(1);
        let f = QuadraticForm::new().with_term(x, x, int(2)).with_term(x, x, int(-2));
        assert!(f.is_zero());
    }

    #[test]
    fn evaluation() {
        let x = VarRef::value(1);
        let f = QuadraticForm::new().with_term(x, x, int(1));
        assert_eq!(f.eval(|_| 2.0), 4.0);
    }
}
