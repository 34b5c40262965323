use nullkg::diagnostics::huygens_check;
use nullkg::examples::catalog;
use nullkg::experiments::free_wave_gaussian;
use nullkg::solver::{
    discrete_energy, initial_state, read_field_dump, read_series_csv, run_simulation, step_leapfrog, write_field_dump,
    write_snapshots_csv, DumpGrid, InitialData, Mode, Profile, SolverConfig, SolverError,
};

fn radial_cfg(dr: f64, t_end: f64, r_max: Option<f64>) -> SolverConfig {
    SolverConfig { dt: None, t_end, epsilon: 1.0, mode: Mode::Radial { dr, r_max }, snapshot_interval: 0.5, ..Default::default() }
}

#[test]
fn free_wave_matches_dalembert() {
    let data = InitialData::uniform(Profile::Gaussian { r0: 1.0 }, 1, 1.0, 0.0);
    let res = run_simulation(&catalog::free_wave(), &data, &radial_cfg(0.025, 4.0, Some(12.0))).unwrap();
    let s = &res.final_state;
    let err = s.u[0]
        .iter()
        .enumerate()
        .map(|(i, u)| (u - free_wave_gaussian(s.t, (i as f64 + 0.5) * 0.025, 1.0)).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-3, "max error {err}");
}

#[test]
fn constant_kg_data_oscillates_as_cosine() {
    // Flat data away from the outer boundary: u = ε cos(m t).
    let data = InitialData::uniform(Profile::Gaussian { r0: 1e4 }, 1, 1.0, 0.0);
    let mut cfg = radial_cfg(0.05, 3.0, Some(10.0));
    cfg.epsilon = 0.1;
    let (mut sim, mut s) = {
        let spec = catalog::free_kg(1.0);
        let sim = nullkg::solver::Simulator::new(&spec, &cfg, 0.0).unwrap();
        let s = sim.initial_state(&data, cfg.epsilon).unwrap();
        (sim, s)
    };
    while s.t < 3.0 - 1e-9 {
        step_leapfrog(&mut s, &mut sim);
    }
    let exact = 0.1 * s.t.cos();
    assert!((s.u[0][0] - exact).abs() < 1e-4, "{} vs {exact}", s.u[0][0]);
}

#[test]
fn zero_data_stays_zero() {
    let data = InitialData::uniform(Profile::Gaussian { r0: 1.0 }, 7, 0.0, 0.0);
    let res = run_simulation(&catalog::kgz_radial(), &data, &radial_cfg(0.1, 2.0, None)).unwrap();
    assert_eq!(res.final_state.max_abs(), 0.0);
    assert!(res.snapshots.iter().all(|s| s.energy == 0.0));
}

#[test]
fn energy_of_a_constant_field() {
    // Only the mass term contributes: Σ V_i m² c² with Σ V_i = 4πR³/3.
    let cfg = radial_cfg(0.05, 1.0, Some(5.0));
    let sim = nullkg::solver::Simulator::new(&catalog::free_kg(2.0), &cfg, 0.0).unwrap();
    let mut s = nullkg::solver::FieldState::zeros(1, sim.grid_len());
    s.u[0].iter_mut().for_each(|x| *x = 0.5);
    let expect = 4.0 * 0.25 * 4.0 * std::f64::consts::PI / 3.0 * 125.0;
    let e = discrete_energy(&s, &sim);
    assert!((e - expect).abs() / expect < 1e-12, "{e} vs {expect}");
}

#[test]
fn huygens_for_wave_but_not_for_kg() {
    let data = InitialData::uniform(Profile::Bump { r0: 1.0 }, 1, 1.0, 0.0);
    let cfg = radial_cfg(0.02, 5.0, None);
    let (mut sim, s) = initial_state(&catalog::free_wave(), &data, &cfg).unwrap();
    let res = sim.run(s, 5.0, 5.0);
    let rep = huygens_check(&sim, &res.final_state, 1, 1.0);
    assert!(!rep.vacuous() && rep.interior_max <= 1e-3, "{rep:?}");

    let (mut sim, s) = initial_state(&catalog::free_kg(1.0), &data, &cfg).unwrap();
    let res = sim.run(s, 5.0, 5.0);
    let rep = huygens_check(&sim, &res.final_state, 1, 1.0);
    assert!(rep.interior_max > 1e-3, "KG has a wake: {rep:?}");
}

#[test]
fn q0_matches_logarithmic_solution() {
    // w = −ln(1 − φ) with φ a free wave solves □w = Q0(w, w).
    let a = 0.5;
    let cfg = radial_cfg(0.025, 3.0, Some(12.0));
    let data = InitialData::uniform(Profile::Gaussian { r0: 1.0 }, 1, 0.0, 0.0);
    let (mut sim, mut s) = initial_state(&catalog::null_q0(), &data, &cfg).unwrap();
    for i in 0..sim.grid_len() {
        s.u[0][i] = -(1.0 - a * free_wave_gaussian(0.0, sim.radius(i), 1.0)).ln();
    }
    while s.t < 3.0 - 1e-9 {
        sim.step(&mut s);
    }
    let err = (0..sim.grid_len())
        .map(|i| (s.u[0][i] + (1.0 - a * free_wave_gaussian(s.t, sim.radius(i), 1.0)).ln()).abs())
        .fold(0.0, f64::max);
    assert!(err < 2e-3, "max error {err}");
}

#[test]
fn john_blows_up_for_large_data() {
    let data = InitialData::uniform(Profile::Gaussian { r0: 0.5 }, 1, 30.0, 0.0);
    let mut cfg = radial_cfg(0.02, 5.0, None);
    cfg.epsilon = 0.3;
    let res = run_simulation(&catalog::john_blowup(), &data, &cfg).unwrap();
    let t = res.blowup_time.expect("blows up");
    assert!(t > 0.5 && t < 2.0, "{t}");
    assert!(res.final_state.blowup);
}

#[test]
fn invalid_configs_are_rejected() {
    let data = InitialData::uniform(Profile::Gaussian { r0: 1.0 }, 1, 1.0, 0.0);
    let mut cfg = radial_cfg(0.05, 10.0, Some(5.0));
    assert!(matches!(run_simulation(&catalog::free_wave(), &data, &cfg), Err(SolverError::InvalidConfig(_))));
    cfg.mode = Mode::Radial { dr: 0.05, r_max: None };
    cfg.dt = Some(0.2);
    assert!(matches!(run_simulation(&catalog::free_wave(), &data, &cfg), Err(SolverError::InvalidConfig(_))));
    let two = InitialData::uniform(Profile::Gaussian { r0: 1.0 }, 2, 1.0, 0.0);
    assert!(run_simulation(&catalog::free_wave(), &two, &radial_cfg(0.05, 1.0, None)).is_err());
}

#[test]
fn csv_and_dump_roundtrip_through_files() {
    let data = InitialData::uniform(Profile::Gaussian { r0: 1.0 }, 2, 1.0, 0.5);
    let res = run_simulation(&catalog::kata_raw(), &data, &radial_cfg(0.1, 2.0, None)).unwrap();
    let mut csv = Vec::new();
    write_snapshots_csv(&res.snapshots, &mut csv).unwrap();
    let rows = read_series_csv(csv.as_slice()).unwrap();
    assert_eq!(rows.len(), 2 * res.snapshots.len());
    assert_eq!(rows[3].sup_u, res.snapshots[1].components[1].sup_u);
    assert_eq!(rows[3].energy, res.snapshots[1].energy);

    let mut dump = Vec::new();
    let grid = DumpGrid::Radial { nr: res.grid_len as u64, dr: res.spacing };
    write_field_dump(&res.final_state, grid, &mut dump).unwrap();
    let (g, s) = read_field_dump(dump.as_slice()).unwrap();
    assert_eq!(g, grid);
    assert_eq!(s.u, res.final_state.u);
    assert_eq!(s.ut, res.final_state.ut);
}

#[test]
fn cartesian_free_wave_conserves_energy() {
    let data = InitialData::uniform(Profile::Gaussian { r0: 1.0 }, 1, 1.0, 0.0);
    let cfg = SolverConfig {
        t_end: 1.0,
        epsilon: 1.0,
        mode: Mode::Cartesian { n: 33, half_width: 8.0 },
        snapshot_interval: 0.25,
        ..Default::default()
    };
    let res = run_simulation(&catalog::free_wave(), &data, &cfg).unwrap();
    let e0 = res.snapshots[0].energy;
    for s in &res.snapshots {
        assert!((s.energy - e0).abs() / e0 < 0.05, "{} vs {e0}", s.energy);
    }
}
