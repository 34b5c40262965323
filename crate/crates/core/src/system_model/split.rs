use std::collections::BTreeSet;

use num_traits::Zero;

use super::form::QuadraticForm;
use super::spec::{LinearForm, SystemSpec};

/// Restriction of a quadratic form to wave-wave, KG-KG and mixed pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplitForm {
    pub w: QuadraticForm,
    pub k: QuadraticForm,
    pub kw: QuadraticForm,
}

impl SplitForm {
    pub fn reconstruct(&self) -> QuadraticForm {
        let mut out = self.w.clone();
        out.add_form(&self.k);
        out.add_form(&self.kw);
        out
    }
}

/// Components `> n1` are wave components.
pub fn split_form(f: &QuadraticForm, n1: usize) -> SplitForm {
    let wave = |c: usize| c > n1;
    SplitForm {
        w: f.filter(|x, y| wave(x.component) && wave(y.component)),
        k: f.filter(|x, y| !wave(x.component) && !wave(y.component)),
        kw: f.filter(|x, y| wave(x.component) != wave(y.component)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricityReport {
    pub symmetric: bool,
    /// `(i, j, k, a)` entries whose mirror differs.
    pub violations: Vec<(usize, usize, u8, u8)>,
    /// Set when the system carries no quasilinear tables at all.
    pub gamma_absent: bool,
}

/// Checks `γ^{ij}_{ka} = γ^{ji}_{ka}` and `γ^{ij}_{kl} = γ^{ij}_{lk}`.
pub fn validate_symmetricity(spec: &SystemSpec) -> SymmetricityReport {
    let Some(g) = spec.gamma() else {
        return SymmetricityReport { symmetric: true, violations: vec![], gamma_absent: true };
    };
    let same = |x: &LinearForm, y: &LinearForm| {
        x.iter().filter(|(_, c)| !c.is_zero()).eq(y.iter().filter(|(_, c)| !c.is_zero()))
    };
    let mut bad = BTreeSet::new();
    for &(i, j, k, a) in g.entries.keys() {
        let here = g.get(i, j, k, a);
        if !same(&here, &g.get(j, i, k, a)) {
            bad.insert((i.min(j), i.max(j), k, a));
        }
        if a >= 1 && !same(&here, &g.get(i, j, a, k)) {
            bad.insert((i, j, k.min(a), k.max(a)));
        }
    }
    SymmetricityReport { symmetric: bad.is_empty(), violations: bad.into_iter().collect(), gamma_absent: false }
}
