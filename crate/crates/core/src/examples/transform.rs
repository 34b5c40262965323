//! Change of unknowns `ṽ_i = v_i − m_i⁻² P_i` with `P_i` the wave-wave
//! quadratic part of the `i`-th Klein-Gordon equation.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::{self, Rational};
use crate::system_model::{split_form, Deriv, Equation, Polynomial, SystemSpec, VarRef};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("component {0} has zero or non-representable mass")]
    Mass(usize),
    #[error("wave-wave part of equation {equation}: {reason}")]
    OutsideJet { equation: usize, reason: String },
}

#[derive(Clone, Debug)]
pub struct Transformed {
    pub spec: SystemSpec,
    /// The new system carries tails produced by the transform.
    pub generated_cubic: bool,
    /// `P_i` for every transformed component `i`.
    pub shifts: BTreeMap<usize, Polynomial>,
}

fn outside(equation: usize, e: impl std::fmt::Display) -> TransformError {
    TransformError::OutsideJet { equation, reason: e.to_string() }
}

/// `∂` applied according to `deriv` (spatial slot last).
fn derive(p: &Polynomial, deriv: Deriv) -> Result<Polynomial, crate::system_model::var::DerivOverflow> {
    match deriv {
        Deriv::None => Ok(p.clone()),
        Deriv::First(a) => p.differentiate(a),
        Deriv::Second(k, a) => p.differentiate(a)?.differentiate(k),
    }
}

/// `□ f` for a jet variable `f = ∂^α w_j` of a wave component, using
/// `□ w_j = F_j`.
fn box_of(v: &VarRef, rhs: &BTreeMap<usize, Polynomial>) -> Result<Polynomial, String> {
    let f = &rhs[&v.component];
    derive(f, v.deriv).map_err(|e| format!("□{v} needs {e}"))
}

/// `□ P` for a quadratic polynomial in wave variables, via
/// `□(fg) = 2 Q_0(f, g) + (□f) g + f (□g)`.
fn box_quadratic(p: &Polynomial, rhs: &BTreeMap<usize, Polynomial>) -> Result<Polynomial, String> {
    let mut out = Polynomial::zero();
    for (mono, c) in p.terms() {
        let [f, g] = mono.as_slice() else {
            return Err("shift is not homogeneous quadratic".into());
        };
        let two = rational::int(2);
        for a in 0..4u8 {
            let sign = if a == 0 { two.clone() } else { -two.clone() };
            let fa = f.differentiate(a).map_err(|e| format!("Q0({f}, {g}) needs {e}"))?;
            let ga = g.differentiate(a).map_err(|e| format!("Q0({f}, {g}) needs {e}"))?;
            out.add_monomial(vec![fa, ga], c * &sign);
        }
        let fv = Polynomial::var(*f);
        let gv = Polynomial::var(*g);
        out.add_assign(&box_of(f, rhs)?.mul(&gv).scaled(c));
        out.add_assign(&fv.mul(&box_of(g, rhs)?).scaled(c));
    }
    Ok(out)
}

pub fn normal_form_transform(spec: &SystemSpec) -> Result<Transformed, TransformError> {
    let n1 = spec.n1();
    let mut shifts = BTreeMap::new();
    for i in 1..=n1 {
        let p = split_form(&spec.equation(i).quadratic, n1).w.to_polynomial();
        if !p.is_zero() {
            let m = rational::from_f64(spec.mass(i)).filter(|m| !m.is_zero()).ok_or(TransformError::Mass(i))?;
            shifts.insert(i, (p, Rational::one() / (&m * &m)));
        }
    }
    if shifts.is_empty() {
        return Ok(Transformed { spec: spec.clone(), generated_cubic: false, shifts: BTreeMap::new() });
    }

    // v_i → ṽ_i + m⁻² ∂^α P_i on every jet variable of a shifted component.
    let mut images: BTreeMap<VarRef, Polynomial> = BTreeMap::new();
    let mut originals: Vec<Polynomial> = Vec::new();
    for i in 1..=spec.n() {
        originals.push(spec.equation(i).full());
    }
    for p in &originals {
        for v in p.vars() {
            if let Some((shift, inv)) = shifts.get(&v.component) {
                if images.contains_key(&v) {
                    continue;
                }
                let d = derive(shift, v.deriv).map_err(|e| outside(v.component, format!("{v} in the shift needs {e}")))?;
                images.insert(v, Polynomial::var(v).add(&d.scaled(inv)));
            }
        }
    }
    let sigma = |p: &Polynomial| p.substitute(|v| images.get(v).cloned());

    let new_rhs: Vec<Polynomial> = originals.iter().map(&sigma).collect();
    let wave_rhs: BTreeMap<usize, Polynomial> = (n1 + 1..=spec.n()).map(|j| (j, new_rhs[j - 1].clone())).collect();

    let mut equations = Vec::with_capacity(spec.n());
    let mut generated_cubic = false;
    for i in 1..=spec.n() {
        let mut full = new_rhs[i - 1].clone();
        if let Some((shift, inv)) = shifts.get(&i) {
            for v in shift.vars() {
                if v.order() > 1 {
                    return Err(outside(i, format!("second-derivative factor {v}")));
                }
            }
            let boxed = box_quadratic(shift, &wave_rhs).map_err(|e| outside(i, e))?;
            full = full.sub(shift).sub(&boxed.scaled(inv));
        }
        debug_assert!(full.min_degree().map_or(true, |d| d >= 2));
        let quadratic = full.homogeneous(2).quadratic_part();
        let tail = full.from_degree(3);
        let old_tail = spec.equation(i).tail.clone().unwrap_or_default();
        if tail != old_tail {
            generated_cubic = true;
        }
        equations.push(Equation { quadratic, tail: Some(tail).filter(|t| !t.is_zero()) });
    }
    let spec = SystemSpec::with_gamma(spec.n(), n1, spec.masses().to_vec(), equations, spec.gamma().cloned())
        .expect("transform preserves validity");
    let shifts = shifts.into_iter().map(|(i, (p, _))| (i, p)).collect();
    Ok(Transformed { spec, generated_cubic, shifts })
}

/// Initial data for the transformed unknowns: `ṽ = v − m⁻² P`,
/// `∂_t ṽ = ∂_t v − m⁻² ∂_t P`, given jet values of the original unknowns.
/// `None` if `∂_t P` leaves the jet space.
pub fn shift_value(shift: &Polynomial, mass: f64, jet: impl Fn(&VarRef) -> f64) -> Option<(f64, f64)> {
    let inv = 1.0 / (mass * mass);
    let p = shift.eval(&jet);
    let pt = shift.differentiate(0).ok()?.eval(&jet);
    Some((inv * p, inv * pt))
}
