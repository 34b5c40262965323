//! Exact decomposition of quadratic forms into the null forms
//! `Q_0(∂^α u_j, ∂^β u_k)` and `Q_ab(∂^α u_j, ∂^β u_k)`, `|α|, |β| ≤ 1`.

use std::collections::BTreeMap;
use std::fmt;

use super::symbol::{find_null_witness, find_symbol_witness, SymbolWitness};
use crate::linalg::LinearSystem;
use crate::rational::{self, Rational};
use crate::system_model::{split_form, QuadraticForm, SystemSpec, VarRef};

/// Argument `∂^α u_j` of a null form, with `|α| ≤ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub component: usize,
    pub alpha: Option<u8>,
}

impl Factor {
    pub fn new(component: usize, alpha: Option<u8>) -> Self {
        Factor { component, alpha }
    }

    fn var(&self) -> VarRef {
        match self.alpha {
            None => VarRef::value(self.component),
            Some(a) => VarRef::first(self.component, a),
        }
    }

    /// `∂_a ∂^α u_j`, or `None` for `∂_0∂_0`.
    fn d(&self, a: u8) -> Option<VarRef> {
        self.var().differentiate(a).ok()
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alpha {
            None => write!(f, "u{}", self.component),
            Some(a) => write!(f, "d{}u{}", a, self.component),
        }
    }
}

/// `Q_0(f, g) = ∂_t f ∂_t g − ∇f·∇g`; `None` if it needs `∂_0∂_0`.
pub fn q0(f: Factor, g: Factor) -> Option<QuadraticForm> {
    let mut out = QuadraticForm::new();
    out.add_term(f.d(0)?, g.d(0)?, rational::one());
    for k in 1..4 {
        out.add_term(f.d(k)?, g.d(k)?, rational::int(-1));
    }
    Some(out)
}

/// `Q_ab(f, g) = ∂_a f ∂_b g − ∂_b f ∂_a g`; `None` if it needs `∂_0∂_0`.
pub fn qab(a: u8, b: u8, f: Factor, g: Factor) -> Option<QuadraticForm> {
    let mut out = QuadraticForm::new();
    out.add_term(f.d(a)?, g.d(b)?, rational::one());
    out.add_term(f.d(b)?, g.d(a)?, rational::int(-1));
    Some(out)
}

/// One basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NullForm {
    Q0(Factor, Factor),
    Qab(u8, u8, Factor, Factor),
}

impl NullForm {
    pub fn expand(&self) -> Option<QuadraticForm> {
        match *self {
            NullForm::Q0(f, g) => q0(f, g),
            NullForm::Qab(a, b, f, g) => qab(a, b, f, g),
        }
    }
}

impl fmt::Display for NullForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NullForm::Q0(x, y) => write!(f, "Q0({x}, {y})"),
            NullForm::Qab(a, b, x, y) => write!(f, "Q{a}{b}({x}, {y})"),
        }
    }
}

/// Block of a monomial: its two (component, order − 1) labels, sorted.
type Block = ((usize, usize), (usize, usize));

fn block_of(x: &VarRef, y: &VarRef) -> Option<Block> {
    if x.order() == 0 || y.order() == 0 {
        return None;
    }
    let p = (x.component, x.order() - 1);
    let q = (y.component, y.order() - 1);
    Some(if p <= q { (p, q) } else { (q, p) })
}

fn factors(component: usize, order: usize) -> Vec<Factor> {
    if order == 0 {
        vec![Factor::new(component, None)]
    } else {
        (0..4).map(|a| Factor::new(component, Some(a))).collect()
    }
}

fn block_basis(block: Block, with_q0: bool) -> Vec<(NullForm, QuadraticForm)> {
    let ((c1, p1), (c2, p2)) = block;
    let mut out = Vec::new();
    for f in factors(c1, p1) {
        for g in factors(c2, p2) {
            if with_q0 && f <= g {
                let e = NullForm::Q0(f, g);
                if let Some(x) = e.expand() {
                    out.push((e, x));
                }
            }
            if f < g {
                for a in 0..4 {
                    for b in a + 1..4 {
                        let e = NullForm::Qab(a, b, f, g);
                        if let Some(x) = e.expand() {
                            out.push((e, x));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Coefficients of a null-form expansion plus the part that could not be
/// expressed. `expand() + residual` equals the input exactly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NullCombination {
    pub coefficients: BTreeMap<NullForm, Rational>,
    pub residual: QuadraticForm,
}

impl NullCombination {
    pub fn expand(&self) -> QuadraticForm {
        let mut out = QuadraticForm::new();
        for (e, c) in &self.coefficients {
            out.add_scaled(&e.expand().expect("basis elements are representable"), c);
        }
        out
    }

    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Express `target` in the null-form basis, block by block. With
/// `with_q0 = false` only `Q_ab` elements are used.
pub fn decompose_null_forms(target: &QuadraticForm, with_q0: bool) -> NullCombination {
    let mut blocks: BTreeMap<Block, QuadraticForm> = BTreeMap::new();
    let mut out = NullCombination::default();
    for (x, y, c) in target.terms() {
        match block_of(x, y) {
            Some(b) => blocks.entry(b).or_default().add_term(*x, *y, c.clone()),
            None => out.residual.add_term(*x, *y, c.clone()),
        }
    }
    for (block, part) in blocks {
        let basis = block_basis(block, with_q0);
        let mut rows: BTreeMap<(VarRef, VarRef), Vec<(usize, Rational)>> = BTreeMap::new();
        for (idx, (_, form)) in basis.iter().enumerate() {
            for (x, y, c) in form.terms() {
                rows.entry((*x, *y)).or_default().push((idx, c.clone()));
            }
        }
        for (x, y, _) in part.terms() {
            rows.entry((*x, *y)).or_default();
        }
        let mut sys = LinearSystem::new();
        for ((x, y), coeffs) in rows {
            sys.push(coeffs, part.coeff(x, y));
        }
        match sys.solve() {
            Some(sol) => {
                for (idx, c) in sol {
                    out.coefficients.insert(basis[idx].0, c);
                }
            }
            None => out.residual.add_form(&part),
        }
    }
    out
}

/// Null-condition certificate for one wave equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullDecomposition {
    /// 1-based equation (component) index.
    pub equation: usize,
    /// `Q_0(f, g)` coefficients, keyed by sorted factor pairs.
    pub a: BTreeMap<(Factor, Factor), Rational>,
    /// `Q_ab(f, g)` coefficients, keyed by `(a, b, f, g)` with `a < b`, `f < g`.
    pub b: BTreeMap<(u8, u8, Factor, Factor), Rational>,
    pub residual: QuadraticForm,
    pub witness: Option<SymbolWitness>,
}

impl NullDecomposition {
    fn from_combination(equation: usize, comb: NullCombination) -> Self {
        let mut a = BTreeMap::new();
        let mut b = BTreeMap::new();
        for (e, c) in comb.coefficients {
            match e {
                NullForm::Q0(f, g) => {
                    a.insert((f, g), c);
                }
                NullForm::Qab(x, y, f, g) => {
                    b.insert((x, y, f, g), c);
                }
            }
        }
        NullDecomposition { equation, a, b, residual: comb.residual, witness: None }
    }

    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }

    /// `Σ A Q_0 + Σ B Q_ab` as a raw quadratic form.
    pub fn expand(&self) -> QuadraticForm {
        let mut out = QuadraticForm::new();
        for (&(f, g), c) in &self.a {
            out.add_scaled(&q0(f, g).expect("representable"), c);
        }
        for (&(x, y, f, g), c) in &self.b {
            out.add_scaled(&qab(x, y, f, g).expect("representable"), c);
        }
        out
    }
}

/// Decompose the wave part of wave equation `i` (a 1-based component index
/// `> N1`). On failure a null witness is searched for.
pub fn check_null_equation(spec: &SystemSpec, i: usize) -> NullDecomposition {
    let fw = split_form(&spec.equation(i).quadratic, spec.n1()).w;
    let mut d = NullDecomposition::from_combination(i, decompose_null_forms(&fw, true));
    if !d.holds() {
        d.witness = find_null_witness(&d.residual, spec.n1(), spec.n2());
    }
    d
}

/// Null condition on every wave equation.
pub fn check_null_condition(spec: &SystemSpec) -> Vec<NullDecomposition> {
    crate::par::map((spec.n1() + 1..=spec.n()).collect(), |i| check_null_equation(spec, i))
}

/// Strong null condition for one equation: the full quadratic part is a
/// combination of `Q_ab` forms over all components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongNullResult {
    pub equation: usize,
    pub holds: bool,
    pub combination: NullCombination,
    pub witness: Option<SymbolWitness>,
}

pub fn check_strong_null(spec: &SystemSpec) -> Vec<StrongNullResult> {
    crate::par::map((1..=spec.n()).collect(), |i| {
        let combination = decompose_null_forms(&spec.equation(i).quadratic, false);
        let holds = combination.is_exact();
        let witness = if holds { None } else { find_symbol_witness(&combination.residual, spec.n()) };
        StrongNullResult { equation: i, holds, combination, witness }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::system_model::Equation;

    fn w(c: usize) -> Factor {
        Factor::new(c, None)
    }

    #[test]
    fn q0_of_w_w_is_recovered() {
        let f = q0(w(1), w(1)).unwrap();
        let d = decompose_null_forms(&f, true);
        assert!(d.is_exact());
        assert_eq!(d.expand(), f);
        assert_eq!(d.coefficients.get(&NullForm::Q0(w(1), w(1))), Some(&int(1)));
    }

    #[test]
    fn time_derivative_square_fails() {
        let dt = VarRef::first(1, 0);
        let spec = SystemSpec::new(1, 0, vec![0.0], vec![Equation::quadratic(
            QuadraticForm::new().with_term(dt, dt, int(1)),
        )])
        .unwrap();
        let d = check_null_equation(&spec, 1);
        assert!(!d.holds());
        let wit = d.witness.unwrap();
        assert_eq!(wit.x, vec![int(1), int(1), int(0), int(0)]);
        assert_eq!(wit.mu, vec![int(1)]);
    }

    #[test]
    fn basis_excludes_time_time() {
        assert!(q0(Factor::new(1, Some(0)), w(2)).is_none());
        assert!(qab(0, 1, Factor::new(1, Some(0)), w(2)).is_none());
        assert!(qab(1, 2, Factor::new(1, Some(0)), w(2)).is_some());
    }

    #[test]
    fn strong_null_examples() {
        let q12 = qab(1, 2, w(1), w(2)).unwrap();
        let spec = SystemSpec::new(2, 0, vec![0.0, 0.0], vec![Equation::quadratic(q12.clone()), Equation::quadratic(q12)])
            .unwrap();
        assert!(check_strong_null(&spec).iter().all(|r| r.holds));

        let spec = SystemSpec::new(1, 0, vec![0.0], vec![Equation::quadratic(q0(w(1), w(1)).unwrap())]).unwrap();
        let r = &check_strong_null(&spec)[0];
        assert!(!r.holds && r.witness.is_some());
        assert!(check_null_condition(&spec)[0].holds());

        let spec = SystemSpec::new(1, 0, vec![0.0], vec![Equation::default()]).unwrap();
        assert!(check_strong_null(&spec)[0].holds);
    }
}
