use serde::{Deserialize, Serialize};

use super::grid::{CartesianGrid, RadialGrid};
use super::nonlinear::{CompiledSystem, GridRef, Jet};
use super::SolverError;
use crate::diagnostics::weights::{weighted_sup_values, WeightSpec};
use crate::system_model::{SystemSpec, JET_WIDTH};

/// Radial data profile `p(r)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// `exp(−(r/r0)²)`
    Gaussian { r0: f64 },
    /// `(1 − (r/r0)²)⁴` for `r < r0`
    Bump { r0: f64 },
}

impl Profile {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Profile::Gaussian { r0 } => (-(r / r0).powi(2)).exp(),
            Profile::Bump { r0 } => {
                if r < r0 {
                    (1.0 - (r / r0).powi(2)).powi(4)
                } else {
                    0.0
                }
            }
        }
    }

    /// Radius beyond which the profile is negligible (below `e^{-36}` for
    /// the Gaussian).
    pub fn support(&self) -> f64 {
        match *self {
            Profile::Gaussian { r0 } => 6.0 * r0,
            Profile::Bump { r0 } => r0,
        }
    }
}

/// Amplitudes of `u_i(0) = ε a_i p(r)` and `∂_t u_i(0) = ε b_i p(r)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentData {
    pub u: f64,
    pub ut: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialData {
    pub profile: Profile,
    pub components: Vec<ComponentData>,
}

impl InitialData {
    /// The same amplitudes for every component.
    pub fn uniform(profile: Profile, n: usize, u: f64, ut: f64) -> Self {
        InitialData { profile, components: vec![ComponentData { u, ut }; n] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    /// Radial grid of spacing `dr`; the radius defaults to
    /// `t_end + support + 20 dr` so nothing reaches the boundary.
    Radial { dr: f64, r_max: Option<f64> },
    /// `n³` vertices on `[−L, L]³`.
    Cartesian { n: usize, half_width: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Time step; `None` picks `cfl_factor · min(spacing, 1/m_max)`.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub epsilon: f64,
    pub cfl_factor: f64,
    pub mode: Mode,
    /// Blowup is flagged when `max(|u|, |∂_t u|)` exceeds this.
    pub blowup_threshold: f64,
    /// Time between recorded snapshots.
    pub snapshot_interval: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt: None,
            t_end: 10.0,
            epsilon: 0.01,
            cfl_factor: 0.5,
            mode: Mode::Radial { dr: 0.05, r_max: None },
            blowup_threshold: 1e3,
            snapshot_interval: 1.0,
        }
    }
}

/// Discrete solution `(u, ∂_t u)` at one time level.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub u: Vec<Vec<f64>>,
    pub ut: Vec<Vec<f64>>,
    pub steps: u64,
    /// `(t, max |u|)` after every step.
    pub max_history: Vec<(f64, f64)>,
    pub blowup: bool,
}

impl FieldState {
    pub fn zeros(n: usize, len: usize) -> Self {
        FieldState { t: 0.0, u: vec![vec![0.0; len]; n], ut: vec![vec![0.0; len]; n], steps: 0, max_history: vec![], blowup: false }
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    fn max_abs_with_ut(&self) -> f64 {
        self.u.iter().chain(&self.ut).flatten().fold(0.0f64, |m, x| if x.is_finite() { m.max(x.abs()) } else { f64::INFINITY })
    }
}

#[derive(Clone, Debug)]
enum Grid {
    Radial(RadialGrid),
    Cartesian(CartesianGrid),
}

impl Grid {
    fn len(&self) -> usize {
        match self {
            Grid::Radial(g) => g.nr,
            Grid::Cartesian(g) => g.len(),
        }
    }

    fn as_ref(&self) -> GridRef<'_> {
        match self {
            Grid::Radial(g) => GridRef::Radial(g),
            Grid::Cartesian(g) => GridRef::Cartesian(g),
        }
    }

    fn laplacian(&self, u: &[f64], out: &mut [f64]) {
        match self {
            Grid::Radial(g) => g.laplacian(u, out),
            Grid::Cartesian(g) => g.laplacian(u, out),
        }
    }

    fn radius(&self, idx: usize) -> f64 {
        match self {
            Grid::Radial(g) => g.r(idx),
            Grid::Cartesian(g) => g.radius(idx),
        }
    }
}

/// Per-component norms recorded at a snapshot.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentStats {
    pub sup_u: f64,
    pub sup_ut: f64,
    /// `sup |∂u|` with `|∂u|² = u_t² + |∇u|²`.
    pub sup_du: f64,
    /// `sup ⟨t+r⟩^{3/2} |u|`
    pub weighted_kg: f64,
    /// `sup ⟨r⟩⟨t−r⟩ |∂u|`
    pub weighted_wave: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub components: Vec<ComponentStats>,
    pub energy: f64,
}

#[derive(Clone, Debug)]
pub struct SimulationResult {
    pub snapshots: Vec<Snapshot>,
    pub final_state: FieldState,
    pub blowup_time: Option<f64>,
    pub dt: f64,
    pub grid_len: usize,
    /// Radial spacing or Cartesian step.
    pub spacing: f64,
}

impl SimulationResult {
    /// `(t, value)` series for one component.
    pub fn series(&self, component: usize, pick: impl Fn(&ComponentStats) -> f64) -> Vec<(f64, f64)> {
        self.snapshots.iter().map(|s| (s.t, pick(&s.components[component - 1]))).collect()
    }
}

/// Integrator state: grid, compiled nonlinearity and scratch buffers.
pub struct Simulator {
    grid: Grid,
    system: CompiledSystem,
    masses: Vec<f64>,
    pub dt: f64,
    threshold: f64,
    lap: Vec<f64>,
}

impl Simulator {
    pub fn new(spec: &SystemSpec, cfg: &SolverConfig, support: f64) -> Result<Self, SolverError> {
        if !(cfg.t_end >= 0.0) || !(cfg.cfl_factor > 0.0) || !(cfg.blowup_threshold > 0.0) {
            return Err(SolverError::InvalidConfig("t_end, cfl_factor and blowup_threshold must be positive".into()));
        }
        let m_max = spec.masses().iter().fold(0.0f64, |a, &b| a.max(b));
        let stiff = if m_max > 0.0 { 1.0 / m_max } else { f64::INFINITY };
        let (grid, limit) = match cfg.mode {
            Mode::Radial { dr, r_max } => {
                if !(dr > 0.0) {
                    return Err(SolverError::InvalidConfig("dr must be positive".into()));
                }
                let needed = cfg.t_end + support;
                let r_max = r_max.unwrap_or(needed + 20.0 * dr);
                if r_max <= needed {
                    return Err(SolverError::InvalidConfig(format!(
                        "radius {r_max} does not exceed t_end + data support = {needed}"
                    )));
                }
                (Grid::Radial(RadialGrid::new(r_max, dr)), dr)
            }
            Mode::Cartesian { n, half_width } => {
                if n < 3 || !(half_width > 0.0) {
                    return Err(SolverError::InvalidConfig("Cartesian grid needs n ≥ 3 and L > 0".into()));
                }
                let g = CartesianGrid::new(n, half_width);
                (Grid::Cartesian(g), g.h / 3f64.sqrt())
            }
        };
        let max_dt = cfg.cfl_factor * limit.min(stiff);
        let dt = match cfg.dt {
            Some(dt) if dt > 0.0 && dt <= max_dt * (1.0 + 1e-12) => dt,
            Some(dt) => return Err(SolverError::InvalidConfig(format!("dt = {dt} violates the CFL bound {max_dt}"))),
            None => max_dt,
        };
        let system = CompiledSystem::new(spec, matches!(grid, Grid::Radial(_)))?;
        let len = grid.len();
        Ok(Simulator { grid, system, masses: spec.masses().to_vec(), dt, threshold: cfg.blowup_threshold, lap: vec![0.0; len] })
    }

    pub fn grid_len(&self) -> usize {
        self.grid.len()
    }

    pub fn grid_ref(&self) -> GridRef<'_> {
        self.grid.as_ref()
    }

    pub fn radius(&self, idx: usize) -> f64 {
        self.grid.radius(idx)
    }

    pub fn spacing(&self) -> f64 {
        match &self.grid {
            Grid::Radial(g) => g.dr,
            Grid::Cartesian(g) => g.h,
        }
    }

    /// Sample `ε a_i p(r)` and `ε b_i p(r)` on the grid.
    pub fn initial_state(&self, data: &InitialData, epsilon: f64) -> Result<FieldState, SolverError> {
        let n = self.masses.len();
        if data.components.len() != n {
            return Err(SolverError::InvalidConfig(format!("{} data entries for {} components", data.components.len(), n)));
        }
        let len = self.grid.len();
        let mut s = FieldState::zeros(n, len);
        for (c, cd) in data.components.iter().enumerate() {
            for i in 0..len {
                let p = data.profile.eval(self.grid.radius(i));
                s.u[c][i] = epsilon * cd.u * p;
                s.ut[c][i] = epsilon * cd.ut * p;
            }
        }
        Ok(s)
    }

    /// `F_i` at every grid point into `out[i]`.
    fn nonlinearity(&self, u: &[Vec<f64>], ut: &[Vec<f64>], out: &mut [Vec<f64>]) {
        let n = self.masses.len();
        if self.system.equations.iter().all(|e| e.is_zero()) {
            out.iter_mut().for_each(|o| o.iter_mut().for_each(|x| *x = 0.0));
            return;
        }
        let len = self.grid.len();
        let grid = self.grid.as_ref();
        let chunk = 4096.min(len.max(1));
        // Point-major scratch, then scattered per component.
        let mut flat = vec![0.0; len * n];
        crate::par::fill_chunks(&mut flat, chunk * n, |ci, block| {
            let mut jets: Vec<Jet> = vec![[0.0; JET_WIDTH]; n];
            for (k, vals) in block.chunks_mut(n).enumerate() {
                let idx = ci * chunk + k;
                self.system.fill_jets(grid, u, ut, idx, &mut jets);
                for (i, e) in self.system.equations.iter().enumerate() {
                    vals[i] = e.eval(&jets);
                }
            }
        });
        for idx in 0..len {
            for i in 0..n {
                out[i][idx] = flat[idx * n + i];
            }
        }
    }

    fn accel(&mut self, u: &[f64], mass: f64, f: &[f64], out: &mut [f64]) {
        self.grid.laplacian(u, &mut self.lap);
        let m2 = mass * mass;
        for i in 0..u.len() {
            out[i] = self.lap[i] - m2 * u[i] + f[i];
        }
    }

    /// One kick-drift-kick step with the nonlinearity frozen at a
    /// predicted half-step state.
    pub fn step(&mut self, state: &mut FieldState) {
        let n = self.masses.len();
        let len = self.grid.len();
        let h = 0.5 * self.dt;
        let mut f = vec![vec![0.0; len]; n];
        let mut acc = vec![0.0; len];

        self.nonlinearity(&state.u, &state.ut, &mut f);
        let mut up = state.u.clone();
        let mut utp = state.ut.clone();
        for c in 0..n {
            self.accel(&state.u[c], self.masses[c], &f[c], &mut acc);
            for i in 0..len {
                up[c][i] += h * state.ut[c][i];
                utp[c][i] += h * acc[i];
            }
        }
        self.nonlinearity(&up, &utp, &mut f);

        for c in 0..n {
            self.accel(&state.u[c], self.masses[c], &f[c], &mut acc);
            for i in 0..len {
                state.ut[c][i] += h * acc[i];
                state.u[c][i] += self.dt * state.ut[c][i];
            }
            self.accel(&state.u[c], self.masses[c], &f[c], &mut acc);
            for i in 0..len {
                state.ut[c][i] += h * acc[i];
            }
        }
        state.t += self.dt;
        state.steps += 1;
        let m = state.max_abs_with_ut();
        state.max_history.push((state.t, state.max_abs()));
        if !(m <= self.threshold) {
            state.blowup = true;
        }
    }

    pub fn energy(&self, state: &FieldState) -> f64 {
        (0..self.masses.len())
            .map(|c| match &self.grid {
                Grid::Radial(g) => g.energy(&state.u[c], &state.ut[c], self.masses[c]),
                Grid::Cartesian(g) => g.energy(&state.u[c], &state.ut[c], self.masses[c]),
            })
            .sum()
    }

    /// `|∂u|` at every grid point for component `c` (0-based).
    pub fn gradient_norm(&self, state: &FieldState, c: usize) -> Vec<f64> {
        (0..self.grid.len())
            .map(|i| {
                let ut = state.ut[c][i];
                let g2 = match &self.grid {
                    Grid::Radial(g) => g.dr_at(&state.u[c], i).powi(2),
                    Grid::Cartesian(g) => (0..3).map(|k| g.d_at(&state.u[c], i, k).powi(2)).sum(),
                };
                (ut * ut + g2).sqrt()
            })
            .collect()
    }

    pub fn snapshot(&self, state: &FieldState) -> Snapshot {
        let radii: Vec<f64> = (0..self.grid.len()).map(|i| self.grid.radius(i)).collect();
        let kg = WeightSpec::kg();
        let wave = WeightSpec::wave();
        let components = (0..self.masses.len())
            .map(|c| {
                let du = self.gradient_norm(state, c);
                ComponentStats {
                    sup_u: weighted_sup_values(&state.u[c], &radii, state.t, &WeightSpec::One),
                    sup_ut: weighted_sup_values(&state.ut[c], &radii, state.t, &WeightSpec::One),
                    sup_du: du.iter().fold(0.0f64, |m, x| m.max(*x)),
                    weighted_kg: weighted_sup_values(&state.u[c], &radii, state.t, &kg),
                    weighted_wave: weighted_sup_values(&du, &radii, state.t, &wave),
                }
            })
            .collect();
        Snapshot { t: state.t, components, energy: self.energy(state) }
    }

    /// Integrate to `t_end`, stopping early on blowup.
    pub fn run(&mut self, mut state: FieldState, t_end: f64, snapshot_interval: f64) -> SimulationResult {
        let mut snapshots = vec![self.snapshot(&state)];
        let steps = ((t_end - state.t) / self.dt - 1e-9).ceil().max(0.0) as u64;
        let every = ((snapshot_interval / self.dt).round() as u64).max(1);
        let mut blowup_time = None;
        for k in 1..=steps {
            self.step(&mut state);
            if state.blowup {
                blowup_time = Some(state.t);
                break;
            }
            if k % every == 0 || k == steps {
                snapshots.push(self.snapshot(&state));
            }
        }
        SimulationResult {
            snapshots,
            dt: self.dt,
            grid_len: self.grid.len(),
            spacing: self.spacing(),
            final_state: state,
            blowup_time,
        }
    }
}

/// Build a simulator and the sampled initial state.
pub fn initial_state(spec: &SystemSpec, data: &InitialData, cfg: &SolverConfig) -> Result<(Simulator, FieldState), SolverError> {
    let sim = Simulator::new(spec, cfg, data.profile.support())?;
    let state = sim.initial_state(data, cfg.epsilon)?;
    Ok((sim, state))
}

pub fn run_simulation(spec: &SystemSpec, data: &InitialData, cfg: &SolverConfig) -> Result<SimulationResult, SolverError> {
    let (mut sim, state) = initial_state(spec, data, cfg)?;
    Ok(sim.run(state, cfg.t_end, cfg.snapshot_interval))
}

/// Continue from an explicit state (for instance transformed data).
pub fn run_from(
    spec: &SystemSpec,
    state: FieldState,
    cfg: &SolverConfig,
    support: f64,
) -> Result<SimulationResult, SolverError> {
    let mut sim = Simulator::new(spec, cfg, support)?;
    if state.u.len() != spec.n() || state.u.iter().any(|c| c.len() != sim.grid_len()) {
        return Err(SolverError::InvalidConfig("state does not match the grid".into()));
    }
    Ok(sim.run(state, cfg.t_end, cfg.snapshot_interval))
}

/// One step of the integrator.
pub fn step_leapfrog(state: &mut FieldState, sim: &mut Simulator) {
    sim.step(state);
}

pub fn discrete_energy(state: &FieldState, sim: &Simulator) -> f64 {
    sim.energy(state)
}
