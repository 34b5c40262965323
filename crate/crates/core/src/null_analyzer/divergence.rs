//! Exact decomposition of a quadratic form as a space-time divergence
//! `Σ_a ∂_a G_a(u, ∂u)` with quadratic `G_a`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::linalg::LinearSystem;
use crate::rational::Rational;
use crate::system_model::{QuadraticForm, VarRef};

/// Jet variable extended by the unrepresentable `∂_0∂_0 u_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum ExtVar {
    Var(VarRef),
    Dtt(usize),
}

fn ext_d(v: VarRef, a: u8) -> ExtVar {
    match v.differentiate(a) {
        Ok(d) => ExtVar::Var(d),
        Err(_) => ExtVar::Dtt(v.component),
    }
}

fn ext_key(x: ExtVar, y: ExtVar) -> (ExtVar, ExtVar) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// `∂_a (x y)` by the product rule, in extended variables.
fn d_product(a: u8, x: VarRef, y: VarRef) -> [((ExtVar, ExtVar), i64); 2] {
    [(ext_key(ext_d(x, a), ExtVar::Var(y)), 1), (ext_key(ExtVar::Var(x), ext_d(y, a)), 1)]
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("divergence of G contains ∂_0∂_0 u{0}")]
pub struct TimeTimeInExpansion(pub usize);

/// Formal `Σ_a ∂_a G_a` over jet variables.
pub fn expand_divergence(g: &[QuadraticForm; 4]) -> Result<QuadraticForm, TimeTimeInExpansion> {
    let mut ext: BTreeMap<(ExtVar, ExtVar), Rational> = BTreeMap::new();
    for (a, ga) in g.iter().enumerate() {
        for (x, y, c) in ga.terms() {
            for (k, m) in d_product(a as u8, *x, *y) {
                *ext.entry(k).or_insert_with(Rational::zero) += c * Rational::from_integer(m.into());
            }
        }
    }
    let mut out = QuadraticForm::new();
    for ((x, y), c) in ext {
        if c.is_zero() {
            continue;
        }
        match (x, y) {
            (ExtVar::Var(x), ExtVar::Var(y)) => out.add_term(x, y, c),
            (ExtVar::Dtt(j), _) | (_, ExtVar::Dtt(j)) => return Err(TimeTimeInExpansion(j)),
        }
    }
    Ok(out)
}

/// `G_a` for `a = 0..=3` with `Σ_a ∂_a G_a = input − residual`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivergenceCertificate {
    pub g: [QuadraticForm; 4],
    pub residual: QuadraticForm,
}

impl DivergenceCertificate {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn expand(&self) -> QuadraticForm {
        expand_divergence(&self.g).expect("certified G has no ∂_0∂_0 terms")
    }
}

fn low_jet(component: usize) -> Vec<VarRef> {
    let mut v = vec![VarRef::value(component)];
    v.extend((0..4).map(|a| VarRef::first(component, a)));
    v
}

pub fn divergence_decompose(f: &QuadraticForm) -> DivergenceCertificate {
    divergence_decompose_avoiding(f, &BTreeSet::new())
}

/// As [`divergence_decompose`], but `G` may not contain the undifferentiated
/// variable of any component in `forbidden`.
pub fn divergence_decompose_avoiding(f: &QuadraticForm, forbidden: &BTreeSet<usize>) -> DivergenceCertificate {
    let mut blocks: BTreeMap<(usize, usize), QuadraticForm> = BTreeMap::new();
    for (x, y, c) in f.terms() {
        let key = (x.component.min(y.component), x.component.max(y.component));
        blocks.entry(key).or_default().add_term(*x, *y, c.clone());
    }
    let allowed = |v: &VarRef| !(v.is_undifferentiated() && forbidden.contains(&v.component));
    let mut cert = DivergenceCertificate::default();
    for ((j, k), part) in blocks {
        let mut pairs = Vec::new();
        for (p, x) in low_jet(j).into_iter().enumerate() {
            for (q, y) in low_jet(k).into_iter().enumerate() {
                if (j < k || p <= q) && allowed(&x) && allowed(&y) {
                    pairs.push((x, y));
                }
            }
        }
        let unknowns: Vec<(u8, VarRef, VarRef)> =
            (0..4).flat_map(|a| pairs.iter().map(move |&(x, y)| (a, x, y))).collect();
        let mut rows: BTreeMap<(ExtVar, ExtVar), Vec<(usize, Rational)>> = BTreeMap::new();
        for (idx, &(a, x, y)) in unknowns.iter().enumerate() {
            for (key, m) in d_product(a, x, y) {
                rows.entry(key).or_default().push((idx, Rational::from_integer(m.into())));
            }
        }
        for (x, y, _) in part.terms() {
            rows.entry(ext_key(ExtVar::Var(*x), ExtVar::Var(*y))).or_default();
        }
        let mut sys = LinearSystem::new();
        for (key, coeffs) in rows {
            let rhs = match key {
                (ExtVar::Var(x), ExtVar::Var(y)) => part.coeff(x, y),
                _ => Rational::zero(),
            };
            sys.push(coeffs, rhs);
        }
        match sys.solve() {
            Some(sol) => {
                for (idx, c) in sol {
                    let (a, x, y) = unknowns[idx];
                    cert.g[a as usize].add_term(x, y, c);
                }
            }
            None => cert.residual.add_form(&part),
        }
    }
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::null_analyzer::null_form::{qab, Factor};
    use crate::rational::int;

    #[test]
    fn qab_is_a_divergence() {
        let f = qab(1, 2, Factor::new(1, None), Factor::new(2, None)).unwrap();
        let cert = divergence_decompose(&f);
        assert!(cert.holds());
        assert_eq!(cert.expand(), f);
    }

    #[test]
    fn square_of_value_is_not() {
        let v = VarRef::value(1);
        let f = QuadraticForm::new().with_term(v, v, int(1));
        let cert = divergence_decompose(&f);
        assert_eq!(cert.residual, f);
    }

    #[test]
    fn time_derivative_square_needs_dtt() {
        // (∂_t u)^2 = ∂_t(u ∂_t u) − u ∂_t∂_t u: not representable.
        let dt = VarRef::first(1, 0);
        let f = QuadraticForm::new().with_term(dt, dt, int(1));
        assert!(!divergence_decompose(&f).holds());
        let g = [QuadraticForm::new().with_term(VarRef::value(1), dt, int(1)), QuadraticForm::new(), QuadraticForm::new(), QuadraticForm::new()];
        assert_eq!(expand_divergence(&g), Err(TimeTimeInExpansion(1)));
    }

    #[test]
    fn forbidden_variables_are_avoided() {
        // ∂_1(u1 u2) = d1u1 u2 + u1 d1u2; without u2 available it fails.
        let f = QuadraticForm::new()
            .with_term(VarRef::first(1, 1), VarRef::value(2), int(1))
            .with_term(VarRef::value(1), VarRef::first(2, 1), int(1));
        assert!(divergence_decompose(&f).holds());
        let avoid: BTreeSet<usize> = [2].into();
        assert!(!divergence_decompose_avoiding(&f, &avoid).holds());
    }
}
