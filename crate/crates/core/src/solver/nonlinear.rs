//! Pointwise evaluation of nonlinearities from grid data.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::grid::{CartesianGrid, RadialGrid};
use super::SolverError;
use crate::rational;
use crate::system_model::var::{slot_of, SECOND_SLOTS};
use crate::system_model::{Polynomial, SystemSpec, JET_WIDTH};

pub type Jet = [f64; JET_WIDTH];

/// Spatial discretisation the nonlinearity is evaluated on.
#[derive(Clone, Copy, Debug)]
pub enum GridRef<'a> {
    Radial(&'a RadialGrid),
    Cartesian(&'a CartesianGrid),
}

/// A polynomial with float coefficients over `(component, slot)` factors.
#[derive(Clone, Debug, Default)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, usize)>)>,
}

impl CompiledPoly {
    pub fn new(p: &Polynomial) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| (rational::to_f64(c), m.iter().map(|v| (v.component - 1, slot_of(v.deriv))).collect()))
            .collect();
        CompiledPoly { terms }
    }

    #[inline]
    pub fn eval(&self, jets: &[Jet]) -> f64 {
        let mut s = 0.0;
        for (c, m) in &self.terms {
            let mut t = *c;
            for &(comp, slot) in m {
                t *= jets[comp][slot];
            }
            s += t;
        }
        s
    }

    fn mark(&self, needed: &mut [[bool; JET_WIDTH]]) {
        for (_, m) in &self.terms {
            for &(comp, slot) in m {
                needed[comp][slot] = true;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Jet of a radial field at `x = r ω` from `(u, u_t, u_r, u_rr, u_tr)`.
pub fn radial_jet(r: f64, omega: [f64; 3], u: f64, ut: f64, ur: f64, urr: f64, utr: f64) -> Jet {
    let mut j = [0.0; JET_WIDTH];
    j[0] = u;
    j[1] = ut;
    for k in 0..3 {
        j[2 + k] = omega[k] * ur;
    }
    for (s, &(k, a)) in SECOND_SLOTS.iter().enumerate() {
        let (k, a) = (k as usize - 1, a as usize);
        j[5 + s] = if a == 0 {
            omega[k] * utr
        } else {
            let l = a - 1;
            let delta = if k == l { 1.0 } else { 0.0 };
            omega[k] * omega[l] * urr + (delta - omega[k] * omega[l]) * ur / r
        };
    }
    j
}

/// Nonlinearities of a system, compiled for repeated grid evaluation.
#[derive(Clone, Debug)]
pub struct CompiledSystem {
    pub equations: Vec<CompiledPoly>,
    pub needed: Vec<[bool; JET_WIDTH]>,
}

impl CompiledSystem {
    pub fn new(spec: &SystemSpec, radial: bool) -> Result<Self, SolverError> {
        check_second_derivatives(spec)?;
        let equations: Vec<CompiledPoly> = spec.equations().iter().map(|e| CompiledPoly::new(&e.full())).collect();
        let mut needed = vec![[false; JET_WIDTH]; spec.n()];
        for e in &equations {
            e.mark(&mut needed);
        }
        let sys = CompiledSystem { equations, needed };
        if radial {
            sys.check_radial()?;
        }
        Ok(sys)
    }

    /// Rotation invariance: each equation must give the same value for a
    /// radial jet seen along any direction.
    fn check_radial(&self) -> Result<(), SolverError> {
        let n = self.needed.len();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..32 {
            let r: f64 = rng.gen_range(0.2..3.0);
            let data: Vec<[f64; 5]> = (0..n).map(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0))).collect();
            let mut omega = [0.0f64; 3].map(|_| rng.gen_range(-1.0..1.0));
            let norm = omega.iter().map(|x| x * x).sum::<f64>().sqrt();
            omega.iter_mut().for_each(|x| *x /= norm);
            let jets = |w: [f64; 3]| -> Vec<Jet> { data.iter().map(|d| radial_jet(r, w, d[0], d[1], d[2], d[3], d[4])).collect() };
            let (a, b) = (jets([1.0, 0.0, 0.0]), jets(omega));
            for (i, e) in self.equations.iter().enumerate() {
                let scale: f64 = e.terms.iter().map(|(c, m)| c.abs() * m.iter().map(|&(p, s)| a[p][s].abs().max(b[p][s].abs())).product::<f64>()).sum();
                if (e.eval(&a) - e.eval(&b)).abs() > 1e-9 * (1.0 + scale) {
                    return Err(SolverError::NotRadial { equation: i + 1 });
                }
            }
        }
        Ok(())
    }

    /// Fill `jets` for all needed slots at grid point `idx`.
    pub fn fill_jets(&self, grid: GridRef<'_>, u: &[Vec<f64>], ut: &[Vec<f64>], idx: usize, jets: &mut [Jet]) {
        for (c, need) in self.needed.iter().enumerate() {
            if need.iter().any(|&x| x) {
                jets[c] = jet_at(grid, &u[c], &ut[c], idx, need);
            }
        }
    }
}

/// Jet of one component at one grid point; slots not flagged in `need`
/// are left at zero.
pub fn jet_at(grid: GridRef<'_>, u: &[f64], ut: &[f64], idx: usize, need: &[bool; JET_WIDTH]) -> Jet {
    match grid {
        GridRef::Radial(g) => {
            let r = g.r(idx);
            let ur = if need[2] || need[11] || need[13] { g.dr_at(u, idx) } else { 0.0 };
            let urr = if need[8] { g.drr_at(u, idx) } else { 0.0 };
            let utr = if need[5] { g.dr_at(ut, idx) } else { 0.0 };
            // radial_jet along ω = e_1, written out.
            let mut j = [0.0; JET_WIDTH];
            j[0] = u[idx];
            j[1] = ut[idx];
            j[2] = ur;
            j[5] = utr;
            j[8] = urr;
            j[11] = ur / r;
            j[13] = ur / r;
            j
        }
        GridRef::Cartesian(g) => {
            let mut j = [0.0; JET_WIDTH];
            j[0] = u[idx];
            j[1] = ut[idx];
            for k in 0..3 {
                if need[2 + k] {
                    j[2 + k] = g.d_at(u, idx, k);
                }
            }
            for (s, &(k, a)) in SECOND_SLOTS.iter().enumerate() {
                if need[5 + s] {
                    j[5 + s] = if a == 0 {
                        g.d_at(ut, idx, k as usize - 1)
                    } else {
                        g.dd_at(u, idx, k as usize - 1, a as usize - 1)
                    };
                }
            }
            j
        }
    }
}

/// Semilinear second-derivative terms are integrable only when no
/// component differentiated twice has an equation that itself contains
/// second derivatives (the principal part then stays block triangular).
fn check_second_derivatives(spec: &SystemSpec) -> Result<(), SolverError> {
    let eqs: BTreeSet<usize> = spec.second_derivative_equations().into_iter().collect();
    for i in &eqs {
        for v in spec.equation(*i).vars() {
            if v.order() == 2 && eqs.contains(&v.component) {
                return Err(SolverError::Unsupported {
                    var: v,
                    reason: "second derivative of a component whose own equation has second-derivative terms".into(),
                });
            }
        }
    }
    Ok(())
}

/// `F` at grid point `idx` of a state given by `u`, `ut`.
pub fn evaluate_nonlinearity(
    f: &Polynomial,
    grid: GridRef<'_>,
    u: &[Vec<f64>],
    ut: &[Vec<f64>],
    idx: usize,
) -> Result<f64, SolverError> {
    if let Some(v) = f.vars().iter().find(|v| v.component == 0 || v.component > u.len()) {
        return Err(SolverError::Unsupported { var: *v, reason: "component not present in the state".into() });
    }
    let cp = CompiledPoly::new(f);
    let mut need = vec![[false; JET_WIDTH]; u.len()];
    cp.mark(&mut need);
    let jets: Vec<Jet> = (0..u.len()).map(|c| jet_at(grid, &u[c], &ut[c], idx, &need[c])).collect();
    Ok(cp.eval(&jets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::catalog;
    use crate::null_analyzer::{q0, Factor};
    use crate::rational::int;
    use crate::system_model::{Equation, QuadraticForm, VarRef};

    #[test]
    fn radial_fast_path_matches_general_jet() {
        let g = RadialGrid::new(5.0, 0.1);
        let u: Vec<f64> = (0..g.nr).map(|i| (-g.r(i).powi(2)).exp()).collect();
        let ut: Vec<f64> = (0..g.nr).map(|i| g.r(i).sin()).collect();
        for idx in [0, 7, 30] {
            let fast = jet_at(GridRef::Radial(&g), &u, &ut, idx, &[true; JET_WIDTH]);
            let slow = radial_jet(g.r(idx), [1.0, 0.0, 0.0], u[idx], ut[idx], g.dr_at(&u, idx), g.drr_at(&u, idx), g.dr_at(&ut, idx));
            for s in 0..JET_WIDTH {
                assert!((fast[s] - slow[s]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn pointwise_values() {
        let g = RadialGrid::new(2.0, 0.1);
        let square = Polynomial::var(VarRef::value(1)).pow(2);
        let u = vec![vec![2.0; g.nr]];
        let ut = vec![vec![0.0; g.nr]];
        assert_eq!(evaluate_nonlinearity(&square, GridRef::Radial(&g), &u, &ut, 3).unwrap(), 4.0);

        let coupling = QuadraticForm::new().with_term(VarRef::value(7), VarRef::value(1), int(-1)).to_polynomial();
        let mut u = vec![vec![0.0; g.nr]; 7];
        u[0] = vec![3.0; g.nr];
        u[6] = vec![2.0; g.nr];
        let ut = vec![vec![0.0; g.nr]; 7];
        assert_eq!(evaluate_nonlinearity(&coupling, GridRef::Radial(&g), &u, &ut, 5).unwrap(), -6.0);

        let bad = Polynomial::var(VarRef::value(9));
        assert!(matches!(evaluate_nonlinearity(&bad, GridRef::Radial(&g), &u, &ut, 0), Err(SolverError::Unsupported { .. })));
    }

    #[test]
    fn q0_of_plane_wave_is_second_order_small() {
        let f = q0(Factor::new(1, None), Factor::new(1, None)).unwrap().to_polynomial();
        let mut errs = vec![];
        for n in [17, 33] {
            let g = CartesianGrid::new(n, 2.0);
            let u: Vec<f64> = (0..g.len()).map(|i| g.x(i)[0].cos()).collect();
            let ut: Vec<f64> = (0..g.len()).map(|i| g.x(i)[0].sin()).collect();
            let mid = g.index(n / 2 + 1, n / 2, n / 2);
            errs.push(evaluate_nonlinearity(&f, GridRef::Cartesian(&g), &[u], &[ut], mid).unwrap().abs());
        }
        assert!(errs[0] < 0.05 && errs[1] < errs[0] / 3.5, "{errs:?}");
    }

    #[test]
    fn rejects_non_radial_and_nested_second_derivatives() {
        assert!(matches!(CompiledSystem::new(&catalog::kgz_reduced(), true), Err(SolverError::NotRadial { .. })));
        assert!(CompiledSystem::new(&catalog::kgz_reduced(), false).is_ok());
        assert!(CompiledSystem::new(&catalog::kgz_radial(), true).is_ok());

        let q = QuadraticForm::new().with_term(VarRef::value(1), VarRef::second(1, 1, 1), int(1));
        let spec = SystemSpec::new(1, 0, vec![0.0], vec![Equation::quadratic(q)]).unwrap();
        assert!(matches!(CompiledSystem::new(&spec, true), Err(SolverError::Unsupported { .. })));
    }
}
