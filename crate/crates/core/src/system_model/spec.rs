use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::expr::parse_polynomial;
use super::form::QuadraticForm;
use super::poly::Polynomial;
use super::var::VarRef;
use crate::rational::{self, Rational};

/// Right-hand side of one equation: quadratic part plus optional tail of
/// degree three and higher.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Equation {
    pub quadratic: QuadraticForm,
    pub tail: Option<Polynomial>,
}

impl Equation {
    pub fn quadratic(quadratic: QuadraticForm) -> Self {
        Equation { quadratic, tail: None }
    }

    pub fn with_tail(mut self, tail: Polynomial) -> Self {
        self.tail = if tail.is_zero() { None } else { Some(tail) };
        self
    }

    /// Quadratic part plus tail as one polynomial.
    pub fn full(&self) -> Polynomial {
        let mut p = self.quadratic.to_polynomial();
        if let Some(t) = &self.tail {
            p.add_assign(t);
        }
        p
    }

    pub fn vars(&self) -> BTreeSet<VarRef> {
        let mut v = self.quadratic.vars();
        if let Some(t) = &self.tail {
            v.extend(t.vars());
        }
        v
    }
}

/// Linear form in `(ξ, ξ')`.
pub type LinearForm = BTreeMap<VarRef, Rational>;

/// Quasilinear coefficient tables `γ^{ij}_{ka}`; absent keys are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuasilinearCoefficients {
    pub entries: BTreeMap<(usize, usize, u8, u8), LinearForm>,
}

impl QuasilinearCoefficients {
    pub fn set(&mut self, i: usize, j: usize, k: u8, a: u8, form: LinearForm) {
        let form: LinearForm = form.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if form.is_empty() {
            self.entries.remove(&(i, j, k, a));
        } else {
            self.entries.insert((i, j, k, a), form);
        }
    }

    pub fn get(&self, i: usize, j: usize, k: u8, a: u8) -> LinearForm {
        self.entries.get(&(i, j, k, a)).cloned().unwrap_or_default()
    }
}

/// A validated coupled wave / Klein-Gordon system.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    n: usize,
    n1: usize,
    masses: Vec<f64>,
    equations: Vec<Equation>,
    gamma: Option<QuasilinearCoefficients>,
}

/// Which structural invariant a spec violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invariant {
    ComponentCount,
    KleinGordonCount,
    MassCount,
    EquationCount,
    MassFinite,
    PositiveMassUpToN1,
    ZeroMassAfterN1,
    VariableInRange,
    TailDegree,
    GammaIndex,
    GammaArguments,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Invariant::ComponentCount => "component count N must be positive",
            Invariant::KleinGordonCount => "N1 must not exceed N",
            Invariant::MassCount => "one mass per component",
            Invariant::EquationCount => "one equation per component",
            Invariant::MassFinite => "masses must be finite and nonnegative",
            Invariant::PositiveMassUpToN1 => "positive mass for components 1..=N1",
            Invariant::ZeroMassAfterN1 => "zero mass for components after N1",
            Invariant::VariableInRange => "every variable refers to a component in 1..=N",
            Invariant::TailDegree => "tails contain only terms of degree three or more",
            Invariant::GammaIndex => "quasilinear indices in range",
            Invariant::GammaArguments => "quasilinear coefficients depend on (u, ∂u) only",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed spec: {0}")]
    Parse(String),
    #[error("invalid spec ({invariant}): {detail}")]
    Invalid { invariant: Invariant, detail: String },
}

fn invalid(invariant: Invariant, detail: impl Into<String>) -> SpecError {
    SpecError::Invalid { invariant, detail: detail.into() }
}

impl SystemSpec {
    pub fn new(n: usize, n1: usize, masses: Vec<f64>, equations: Vec<Equation>) -> Result<Self, SpecError> {
        Self::with_gamma(n, n1, masses, equations, None)
    }

    pub fn with_gamma(
        n: usize,
        n1: usize,
        masses: Vec<f64>,
        equations: Vec<Equation>,
        gamma: Option<QuasilinearCoefficients>,
    ) -> Result<Self, SpecError> {
        let spec = SystemSpec { n, n1, masses, equations, gamma };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), SpecError> {
        if self.n == 0 {
            return Err(invalid(Invariant::ComponentCount, "N = 0"));
        }
        if self.n1 > self.n {
            return Err(invalid(Invariant::KleinGordonCount, format!("N1 = {} > N = {}", self.n1, self.n)));
        }
        if self.masses.len() != self.n {
            return Err(invalid(Invariant::MassCount, format!("{} masses for N = {}", self.masses.len(), self.n)));
        }
        if self.equations.len() != self.n {
            return Err(invalid(
                Invariant::EquationCount,
                format!("{} equations for N = {}", self.equations.len(), self.n),
            ));
        }
        for (i, &m) in self.masses.iter().enumerate() {
            if !m.is_finite() || m < 0.0 {
                return Err(invalid(Invariant::MassFinite, format!("mass[{}] = {m}", i + 1)));
            }
            if i < self.n1 && m <= 0.0 {
                return Err(invalid(Invariant::PositiveMassUpToN1, format!("mass[{}] = {m} with N1 = {}", i + 1, self.n1)));
            }
            if i >= self.n1 && m != 0.0 {
                return Err(invalid(Invariant::ZeroMassAfterN1, format!("mass[{}] = {m} with N1 = {}", i + 1, self.n1)));
            }
        }
        for (i, eq) in self.equations.iter().enumerate() {
            for v in eq.vars() {
                if v.component == 0 || v.component > self.n {
                    return Err(invalid(
                        Invariant::VariableInRange,
                        format!("equation {} references {v} with N = {}", i + 1, self.n),
                    ));
                }
            }
            if let Some(t) = &eq.tail {
                if t.min_degree().is_some_and(|d| d < 3) {
                    return Err(invalid(Invariant::TailDegree, format!("equation {} tail `{t}`", i + 1)));
                }
            }
        }
        if let Some(g) = &self.gamma {
            for (&(i, j, k, a), form) in &g.entries {
                if i == 0 || i > self.n || j == 0 || j > self.n || !(1..=3).contains(&k) || a > 3 {
                    return Err(invalid(Invariant::GammaIndex, format!("γ^{{{i}{j}}}_{{{k}{a}}}")));
                }
                for v in form.keys() {
                    if v.order() > 1 || v.component == 0 || v.component > self.n {
                        return Err(invalid(Invariant::GammaArguments, format!("γ^{{{i}{j}}}_{{{k}{a}}} uses {v}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n - self.n1
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Mass of 1-based component `i`.
    pub fn mass(&self, i: usize) -> f64 {
        self.masses[i - 1]
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// Equation for 1-based component `i`.
    pub fn equation(&self, i: usize) -> &Equation {
        &self.equations[i - 1]
    }

    pub fn gamma(&self) -> Option<&QuasilinearCoefficients> {
        self.gamma.as_ref()
    }

    pub fn is_wave(&self, component: usize) -> bool {
        component > self.n1
    }

    /// 1-based component index of wave unknown `w_k`.
    pub fn wave_component(&self, k: usize) -> usize {
        self.n1 + k
    }

    /// Equations carrying semilinear second-derivative terms. The analyzer
    /// accepts them; the solver only integrates them when the affected
    /// components do not themselves carry such terms.
    pub fn second_derivative_equations(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&i| self.equation(i).vars().iter().any(|v| v.order() == 2))
            .collect()
    }

    pub fn from_json_str(s: &str) -> Result<Self, SpecError> {
        let raw: SpecJson = serde_json::from_str(s).map_err(|e| SpecError::Parse(e.to_string()))?;
        raw.into_spec()
    }

    /// Canonical JSON text; stable under load/save cycles.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&SpecJson::from_spec(self)).expect("spec serialises");
        s.push('\n');
        s
    }
}

/// Read and validate a spec file.
pub fn load_spec(path: impl AsRef<Path>) -> Result<SystemSpec, SpecError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| SpecError::Io { path: path.display().to_string(), source })?;
    SystemSpec::from_json_str(&text)
}

pub fn save_spec(spec: &SystemSpec, path: impl AsRef<Path>) -> std::io::Result<()> {
    std::fs::write(path, spec.to_json_string())
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    a: VarRef,
    b: VarRef,
    #[serde(with = "rational::serde_str")]
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
struct EquationJson {
    terms: Vec<TermJson>,
    cubic_tail: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct LinearTermJson {
    var: VarRef,
    #[serde(with = "rational::serde_str")]
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
struct GammaJson {
    i: usize,
    j: usize,
    k: u8,
    a: u8,
    form: Vec<LinearTermJson>,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "N1")]
    n1: usize,
    masses: Vec<f64>,
    equations: Vec<EquationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<Vec<GammaJson>>,
}

impl SpecJson {
    fn into_spec(self) -> Result<SystemSpec, SpecError> {
        let mut equations = Vec::with_capacity(self.equations.len());
        for (i, e) in self.equations.into_iter().enumerate() {
            let mut q = QuadraticForm::new();
            for t in e.terms {
                q.add_term(t.a, t.b, t.coeff);
            }
            let tail = match e.cubic_tail.as_deref().map(str::trim) {
                None | Some("") => None,
                Some(src) => Some(
                    parse_polynomial(src)
                        .map_err(|err| SpecError::Parse(format!("equation {} tail: {err}", i + 1)))?,
                ),
            };
            equations.push(Equation { quadratic: q, tail: tail.filter(|t| !t.is_zero()) });
        }
        let gamma = self.gamma.map(|entries| {
            let mut g = QuasilinearCoefficients::default();
            for e in entries {
                let mut form = g.get(e.i, e.j, e.k, e.a);
                for t in e.form {
                    *form.entry(t.var).or_insert_with(Rational::zero) += t.coeff;
                }
                g.set(e.i, e.j, e.k, e.a, form);
            }
            g
        });
        SystemSpec::with_gamma(self.n, self.n1, self.masses, equations, gamma)
    }

    fn from_spec(spec: &SystemSpec) -> SpecJson {
        let equations = spec
            .equations
            .iter()
            .map(|e| EquationJson {
                terms: e
                    .quadratic
                    .terms()
                    .map(|(a, b, c)| TermJson { a: *a, b: *b, coeff: c.clone() })
                    .collect(),
                cubic_tail: e.tail.as_ref().map(|t| t.to_string()),
            })
            .collect();
        let gamma = spec.gamma.as_ref().map(|g| {
            g.entries
                .iter()
                .map(|(&(i, j, k, a), form)| GammaJson {
                    i,
                    j,
                    k,
                    a,
                    form: form.iter().map(|(v, c)| LinearTermJson { var: *v, coeff: c.clone() }).collect(),
                })
                .collect()
        });
        SpecJson { n: spec.n, n1: spec.n1, masses: spec.masses.clone(), equations, gamma }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_ordering_is_enforced() {
        let eqs = vec![Equation::default(), Equation::default()];
        let err = SystemSpec::new(2, 1, vec![0.0, 1.0], eqs).unwrap_err();
        match err {
            SpecError::Invalid { invariant, .. } => assert_eq!(invariant, Invariant::PositiveMassUpToN1),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn free_klein_gordon_is_valid() {
        let json = r#"{"N":1,"N1":1,"masses":[1.0],"equations":[{"terms":[],"cubic_tail":null}]}"#;
        let spec = SystemSpec::from_json_str(json).unwrap();
        assert_eq!(spec.n(), 1);
        assert!(spec.equation(1).quadratic.is_zero());
    }

    #[test]
    fn out_of_range_variable() {
        let json = r#"{"N":1,"N1":0,"masses":[0.0],"equations":[{"terms":[
            {"a":{"component":2,"deriv":null},"b":{"component":1,"deriv":[0]},"coeff":"1"}],"cubic_tail":null}]}"#;
        assert!(matches!(
            SystemSpec::from_json_str(json),
            Err(SpecError::Invalid { invariant: Invariant::VariableInRange, .. })
        ));
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(SystemSpec::from_json_str("{"), Err(SpecError::Parse(_))));
        let bad_coeff = r#"{"N":1,"N1":0,"masses":[0.0],"equations":[{"terms":[
            {"a":{"component":1,"deriv":null},"b":{"component":1,"deriv":null},"coeff":"1/0"}],"cubic_tail":null}]}"#;
        assert!(matches!(SystemSpec::from_json_str(bad_coeff), Err(SpecError::Parse(_))));
    }

    #[test]
    fn quadratic_tail_is_rejected() {
        let json = r#"{"N":1,"N1":0,"masses":[0.0],"equations":[{"terms":[],"cubic_tail":"u1*u1"}]}"#;
        assert!(matches!(
            SystemSpec::from_json_str(json),
            Err(SpecError::Invalid { invariant: Invariant::TailDegree, .. })
        ));
    }
}
