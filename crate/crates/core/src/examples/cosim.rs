//! Lockstep integration of a system and its normal-form transform.

use serde::Serialize;

use super::transform::{normal_form_transform, shift_value, TransformError};
use crate::solver::nonlinear::{jet_at, Jet};
use crate::solver::{initial_state, FieldState, InitialData, Simulator, SolverConfig, SolverError};
use crate::system_model::var::slot_of;
use crate::system_model::{SystemSpec, VarRef, JET_WIDTH};

#[derive(Debug, thiserror::Error)]
pub enum CoSimError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("time derivative of the shift for component {0} leaves the jet space")]
    Shift(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoSimSample {
    pub t: f64,
    /// `max |v − (ṽ + m⁻² P(w̃))|` over grid and transformed components.
    pub max_diff: f64,
    pub max_v: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoSimReport {
    pub samples: Vec<CoSimSample>,
    pub worst: f64,
    pub dt: f64,
    pub spacing: f64,
    pub blowup: bool,
}

fn all_jets(sim: &Simulator, s: &FieldState, idx: usize) -> Vec<Jet> {
    let need = [true; JET_WIDTH];
    (0..s.u.len()).map(|c| jet_at(sim.grid_ref(), &s.u[c], &s.ut[c], idx, &need)).collect()
}

fn lookup(jets: &[Jet]) -> impl Fn(&VarRef) -> f64 + '_ {
    move |v: &VarRef| jets[v.component - 1][slot_of(v.deriv)]
}

/// Evolve `spec` from `data` and the transformed system from the matching
/// data `ṽ = v − m⁻²P`, comparing `v` with `ṽ + m⁻²P` every
/// `sample_interval`.
pub fn co_simulate(spec: &SystemSpec, data: &InitialData, cfg: &SolverConfig, sample_interval: f64) -> Result<CoSimReport, CoSimError> {
    let tr = normal_form_transform(spec)?;
    let (mut sim_a, mut a) = initial_state(spec, data, cfg)?;
    let mut sim_b = Simulator::new(&tr.spec, cfg, data.profile.support())?;
    let mut b = a.clone();
    for idx in 0..sim_a.grid_len() {
        let jets = all_jets(&sim_a, &a, idx);
        for (&i, p) in &tr.shifts {
            let (s, st) = shift_value(p, spec.mass(i), lookup(&jets)).ok_or(CoSimError::Shift(i))?;
            b.u[i - 1][idx] -= s;
            b.ut[i - 1][idx] -= st;
        }
    }
    let compare = |sim_b: &Simulator, a: &FieldState, b: &FieldState| -> CoSimSample {
        let mut max_diff = 0.0f64;
        let mut max_v = 0.0f64;
        for idx in 0..sim_b.grid_len() {
            let jets = all_jets(sim_b, b, idx);
            for (&i, p) in &tr.shifts {
                let m2 = spec.mass(i).powi(2);
                let v = b.u[i - 1][idx] + p.eval(lookup(&jets)) / m2;
                max_diff = max_diff.max((v - a.u[i - 1][idx]).abs());
                max_v = max_v.max(a.u[i - 1][idx].abs());
            }
        }
        CoSimSample { t: a.t, max_diff, max_v }
    };
    let mut samples = vec![compare(&sim_b, &a, &b)];
    let steps = (cfg.t_end / sim_a.dt - 1e-9).ceil() as u64;
    let every = ((sample_interval / sim_a.dt).round() as u64).max(1);
    for k in 1..=steps {
        sim_a.step(&mut a);
        sim_b.step(&mut b);
        if a.blowup || b.blowup {
            break;
        }
        if k % every == 0 || k == steps {
            samples.push(compare(&sim_b, &a, &b));
        }
    }
    let worst = samples.iter().map(|s| s.max_diff).fold(0.0, f64::max);
    Ok(CoSimReport { samples, worst, dt: sim_a.dt, spacing: sim_a.spacing(), blowup: a.blowup || b.blowup })
}
