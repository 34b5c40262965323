use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::form::QuadraticForm;
use super::var::{DerivOverflow, VarRef};
use crate::rational::{self, Rational};

/// Sparse polynomial in jet variables with exact coefficients.
///
/// Monomials are sorted variable lists (repetition encodes powers). Used for
/// cubic-and-higher tails and as scratch space for changes of unknowns.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Vec<VarRef>, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_monomial(vec![], c);
        p
    }

    pub fn var(v: VarRef) -> Self {
        let mut p = Self::zero();
        p.add_monomial(vec![v], Rational::one());
        p
    }

    pub fn add_monomial(&mut self, mut vars: Vec<VarRef>, c: Rational) {
        if c.is_zero() {
            return;
        }
        vars.sort();
        let entry = self.terms.entry(vars.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&vars);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<VarRef>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    pub fn vars(&self) -> BTreeSet<VarRef> {
        self.terms.keys().flatten().copied().collect()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        for (m, c) in other.terms() {
            self.add_monomial(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scaled(&rational::int(-1)))
    }

    pub fn scaled(&self, s: &Rational) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            out.add_monomial(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                out.add_monomial(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::constant(Rational::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Terms of exactly degree `d`.
    pub fn homogeneous(&self, d: usize) -> Polynomial {
        self.filter_degree(|deg| deg == d)
    }

    /// Terms of degree `>= d`.
    pub fn from_degree(&self, d: usize) -> Polynomial {
        self.filter_degree(|deg| deg >= d)
    }

    fn filter_degree(&self, keep: impl Fn(usize) -> bool) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m.len()))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Degree-2 part as a quadratic form.
    pub fn quadratic_part(&self) -> QuadraticForm {
        let mut q = QuadraticForm::new();
        for (m, c) in self.terms().filter(|(m, _)| m.len() == 2) {
            q.add_term(m[0], m[1], c.clone());
        }
        q
    }

    /// Replace every variable for which `sub` returns a polynomial.
    pub fn substitute(&self, mut sub: impl FnMut(&VarRef) -> Option<Polynomial>) -> Polynomial {
        let mut cache: BTreeMap<VarRef, Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            let mut acc = Polynomial::constant(c.clone());
            for v in m {
                let image = cache
                    .entry(*v)
                    .or_insert_with(|| sub(v).unwrap_or_else(|| Polynomial::var(*v)))
                    .clone();
                acc = acc.mul(&image);
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Formal total derivative `∂_a` by the chain rule over jet variables.
    pub fn differentiate(&self, a: u8) -> Result<Polynomial, DerivOverflow> {
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            for i in 0..m.len() {
                let mut mono = m.clone();
                mono[i] = m[i].differentiate(a)?;
                out.add_monomial(mono, c.clone());
            }
        }
        Ok(out)
    }

    pub fn eval(&self, mut value: impl FnMut(&VarRef) -> f64) -> f64 {
        self.terms()
            .map(|(m, c)| rational::to_f64(c) * m.iter().map(&mut value).product::<f64>())
            .sum()
    }

    pub fn eval_exact(&self, mut value: impl FnMut(&VarRef) -> Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in self.terms() {
            let mut t = c.clone();
            for v in m {
                t *= value(v);
            }
            acc += t;
        }
        acc
    }

    pub fn map_vars(&self, mut f: impl FnMut(&VarRef) -> VarRef) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            out.add_monomial(m.iter().map(&mut f).collect(), c.clone());
        }
        out
    }
}

/// Canonical text, parseable by [`crate::system_model::expr::parse_polynomial`].
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let mut parts = Vec::new();
            if !mag.is_one() || m.is_empty() {
                parts.push(rational::format(&mag));
            }
            parts.extend(m.iter().map(|v| v.to_string()));
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
