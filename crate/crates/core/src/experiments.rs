//! Ready-made numerical experiments shared by the command line and the
//! browser demo.

use serde::Serialize;

use crate::examples::catalog;
use crate::solver::{run_simulation, InitialData, Mode, Profile, SimulationResult, SolverConfig, SolverError};

/// Width of the contrast data.
pub const CONTRAST_R0: f64 = 0.5;
/// Profile amplitude of the contrast data, `u(0) = A ε exp(−(r/r0)²)`.
/// Unit amplitude would put the crossing times near `exp(c/ε)`.
pub const CONTRAST_AMPLITUDE: f64 = 30.0;
pub const CONTRAST_DR: f64 = 0.02;
pub const CONTRAST_THRESHOLD: f64 = 1e3;

pub fn contrast_data() -> InitialData {
    InitialData::uniform(Profile::Gaussian { r0: CONTRAST_R0 }, 1, CONTRAST_AMPLITUDE, 0.0)
}

pub fn contrast_config(epsilon: f64, t_end: f64, dr: f64) -> SolverConfig {
    SolverConfig {
        dt: None,
        t_end,
        epsilon,
        cfl_factor: 0.5,
        mode: Mode::Radial { dr, r_max: None },
        blowup_threshold: CONTRAST_THRESHOLD,
        snapshot_interval: 0.5,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Bounded { sup_u: f64, sup_du: f64 },
    Blowup { t: f64 },
}

impl Outcome {
    fn of(r: &SimulationResult) -> Self {
        match r.blowup_time {
            Some(t) => Outcome::Blowup { t },
            None => Outcome::Bounded {
                sup_u: r.snapshots.iter().map(|s| s.components[0].sup_u).fold(0.0, f64::max),
                sup_du: r.snapshots.iter().map(|s| s.components[0].sup_du).fold(0.0, f64::max),
            },
        }
    }

    pub fn blowup_time(&self) -> Option<f64> {
        match self {
            Outcome::Blowup { t } => Some(*t),
            Outcome::Bounded { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContrastRun {
    pub epsilon: f64,
    pub null_form: Outcome,
    pub time_derivative_squared: Outcome,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContrastReport {
    pub t_end: f64,
    pub dr: f64,
    pub amplitude: f64,
    pub r0: f64,
    pub threshold: f64,
    pub runs: Vec<ContrastRun>,
    /// Crossing times strictly increase as `ε` decreases (every `(∂_t w)²`
    /// run crossed).
    pub monotone: bool,
}

/// `□w = Q_0(w,w)` against `□w = (∂_t w)²` with the same data for every
/// `ε` in `epsilons`.
pub fn blowup_contrast(epsilons: &[f64], t_end: f64, dr: f64) -> Result<ContrastReport, SolverError> {
    let data = contrast_data();
    let jobs: Vec<(f64, bool)> = epsilons.iter().flat_map(|&e| [(e, true), (e, false)]).collect();
    let results = crate::par::map(jobs, |(eps, null)| {
        let spec = if null { catalog::null_q0() } else { catalog::john_blowup() };
        run_simulation(&spec, &data, &contrast_config(eps, t_end, dr)).map(|r| Outcome::of(&r))
    });
    let mut it = results.into_iter();
    let mut runs = Vec::new();
    for &epsilon in epsilons {
        let null_form = it.next().expect("one result per job")?;
        let time_derivative_squared = it.next().expect("one result per job")?;
        runs.push(ContrastRun { epsilon, null_form, time_derivative_squared });
    }
    let mut order: Vec<&ContrastRun> = runs.iter().collect();
    order.sort_by(|a, b| b.epsilon.total_cmp(&a.epsilon));
    let times: Option<Vec<f64>> = order.iter().map(|r| r.time_derivative_squared.blowup_time()).collect();
    let monotone = times.map_or(false, |t| t.windows(2).all(|w| w[0] < w[1]));
    Ok(ContrastReport { t_end, dr, amplitude: CONTRAST_AMPLITUDE, r0: CONTRAST_R0, threshold: CONTRAST_THRESHOLD, runs, monotone })
}

/// Free radial wave from `u(0) = exp(−(r/r0)²)`, `∂_t u(0) = 0`:
/// `r u = ½((r+t) f(r+t) + (r−t) f(r−t))`.
pub fn free_wave_gaussian(t: f64, r: f64, r0: f64) -> f64 {
    let g = |s: f64| s * (-(s / r0).powi(2)).exp();
    if r == 0.0 {
        // limit r → 0: g'(t)
        let s = t / r0;
        return (1.0 - 2.0 * s * s) * (-s * s).exp();
    }
    0.5 * (g(r + t) + g(r - t)) / r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_amplitude_stays_zero() {
        let rep = blowup_contrast(&[0.0], 2.0, 0.05).unwrap();
        assert_eq!(rep.runs[0].null_form, Outcome::Bounded { sup_u: 0.0, sup_du: 0.0 });
        assert_eq!(rep.runs[0].time_derivative_squared, Outcome::Bounded { sup_u: 0.0, sup_du: 0.0 });
        assert!(!rep.monotone);
    }

    #[test]
    fn exact_wave_is_continuous_at_origin() {
        assert!((free_wave_gaussian(0.7, 1e-7, 1.0) - free_wave_gaussian(0.7, 0.0, 1.0)).abs() < 1e-6);
    }
}
