mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use manifest::{OutDir, RunManifest};
use nullkg::diagnostics::{
    check_frame_identities, check_null_inequality, dilation_family, fit_decay_exponent, klainerman_sobolev_check, sample_points,
    standard_pairs,
};
use nullkg::examples::catalog::export_fixtures;
use nullkg::experiments::{blowup_contrast, Outcome, CONTRAST_DR};
use nullkg::null_analyzer::analyze_system;
use nullkg::solver::{
    read_series_csv, run_simulation, write_field_dump, write_snapshots_csv, ComponentData, DumpGrid, InitialData, Mode, Profile,
    SeriesRow, SolverConfig,
};
use nullkg::system_model::SystemSpec;

const THREADS_ENV: &str = "NULLKG_THREADS";

#[derive(Parser)]
#[command(name = "nullkg", version, about = "Null-structure analysis and simulation of coupled wave and Klein-Gordon systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the null condition and the partition conditions for a system.
    Analyze {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a system from Gaussian or bump data.
    Simulate(SimulateArgs),
    /// Fit a power law to one column of a simulation CSV.
    DecayFit {
        csv: PathBuf,
        #[arg(long, default_value_t = 1)]
        component: usize,
        /// one, kg, wave, ut or du.
        #[arg(long, default_value = "one")]
        weight: String,
        /// `T1,T2`.
        #[arg(long, default_value = "20,200")]
        window: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the frame identities, the null-form bound or the Sobolev bound.
    Identities {
        /// frame, nullform or sobolev.
        #[arg(long, default_value = "frame")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run Q0(w, w) and (∂_t w)² side by side over an ε sweep.
    Contrast {
        /// Comma-separated amplitudes.
        #[arg(long, default_value = "0.3,0.2,0.1")]
        epsilon: String,
        #[arg(long, default_value_t = 100.0)]
        t_end: f64,
        #[arg(long, default_value_t = CONTRAST_DR)]
        dr: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write every fixture as a JSON system file.
    ExportFixtures {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Radial,
    Cartesian,
}

#[derive(Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum ProfileArg {
    Gaussian,
    Bump,
}

#[derive(Args, serde::Serialize)]
struct SimulateArgs {
    spec: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, default_value_t = 10.0)]
    t_end: f64,
    #[arg(long, value_enum, default_value = "radial")]
    mode: ModeArg,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    dr: f64,
    #[arg(long)]
    r_max: Option<f64>,
    /// Cartesian points per side.
    #[arg(long, default_value_t = 33)]
    n: usize,
    #[arg(long, default_value_t = 10.0)]
    half_width: f64,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    cfl: f64,
    #[arg(long, default_value_t = 1e3)]
    threshold: f64,
    #[arg(long, default_value_t = 0.5)]
    snapshot_interval: f64,
    /// Data profile; overrides an `initial_data` entry in the system file.
    #[arg(long, value_enum)]
    profile: Option<ProfileArg>,
    #[arg(long)]
    r0: Option<f64>,
    /// Comma-separated `u` amplitudes, one per component.
    #[arg(long)]
    amp: Option<String>,
    /// Comma-separated `∂_t u` amplitudes, one per component.
    #[arg(long)]
    velocity: Option<String>,
    /// Also write the final fields to `fields.bin`.
    #[arg(long)]
    dump: bool,
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|x| x.trim().parse::<f64>().with_context(|| format!("bad number {x:?}"))).collect()
}

fn read_spec(path: &Path) -> Result<(SystemSpec, Vec<u8>, Option<InitialData>)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).context("system file is not UTF-8")?;
    let spec = SystemSpec::from_json_str(&text).with_context(|| format!("loading {}", path.display()))?;
    let raw: serde_json::Value = serde_json::from_str(&text)?;
    let data = match raw.get("initial_data") {
        Some(v) => Some(serde_json::from_value(v.clone()).context("bad initial_data")?),
        None => None,
    };
    Ok((spec, bytes, data))
}

fn analyze(spec_path: &Path, out: Option<&Path>) -> Result<ExitCode> {
    let (spec, bytes, _) = read_spec(spec_path)?;
    let report = analyze_system(&spec);
    let value = report.to_json();
    match out {
        Some(dir) => {
            let mut o = OutDir::create(dir, RunManifest::new("analyze", json!({})).with_spec(spec_path, &bytes))?;
            o.write_json("report.json", &value)?;
            o.finish()?;
        }
        None => println!("{}", serde_json::to_string_pretty(&value)?),
    }
    let verdict = match report.partition_sets() {
        Some((i1, i2)) if report.applies() => format!("applies: I1={i1:?} I2={i2:?}"),
        _ => "does not apply".to_string(),
    };
    eprintln!("{}: {verdict}", spec_path.display());
    Ok(if report.applies() { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn simulate(a: &SimulateArgs) -> Result<ExitCode> {
    let (spec, bytes, file_data) = read_spec(&a.spec)?;
    let n = spec.n();
    let base = file_data.unwrap_or_else(|| InitialData::uniform(Profile::Gaussian { r0: 1.0 }, n, 1.0, 0.0));
    let r0 = a.r0.unwrap_or(match base.profile {
        Profile::Gaussian { r0 } | Profile::Bump { r0 } => r0,
    });
    let profile = match a.profile {
        Some(ProfileArg::Gaussian) => Profile::Gaussian { r0 },
        Some(ProfileArg::Bump) => Profile::Bump { r0 },
        None => match base.profile {
            Profile::Gaussian { .. } => Profile::Gaussian { r0 },
            Profile::Bump { .. } => Profile::Bump { r0 },
        },
    };
    let pick = |list: &Option<String>, default: &dyn Fn(usize) -> f64| -> Result<Vec<f64>> {
        match list {
            Some(s) => {
                let v = parse_list(s)?;
                match v.len() {
                    1 => Ok(vec![v[0]; n]),
                    k if k == n => Ok(v),
                    k => bail!("{k} amplitudes for {n} components"),
                }
            }
            None => Ok((0..n).map(default).collect()),
        }
    };
    let get = |i: usize| base.components.get(i).copied().unwrap_or(ComponentData { u: 0.0, ut: 0.0 });
    let us = pick(&a.amp, &|i| get(i).u)?;
    let uts = pick(&a.velocity, &|i| get(i).ut)?;
    let data = InitialData { profile, components: us.iter().zip(&uts).map(|(&u, &ut)| ComponentData { u, ut }).collect() };

    let mode = match a.mode {
        ModeArg::Radial => Mode::Radial { dr: a.dr, r_max: a.r_max },
        ModeArg::Cartesian => Mode::Cartesian { n: a.n, half_width: a.half_width },
    };
    let cfg = SolverConfig {
        dt: a.dt,
        t_end: a.t_end,
        epsilon: a.epsilon,
        cfl_factor: a.cfl,
        mode,
        blowup_threshold: a.threshold,
        snapshot_interval: a.snapshot_interval,
    };
    let res = run_simulation(&spec, &data, &cfg).map_err(|e| anyhow!("{e}"))?;

    let config = json!({"args": a, "data": data, "solver": cfg});
    let mut o = OutDir::create(&a.out, RunManifest::new("simulate", config).with_spec(&a.spec, &bytes))?;
    let mut csv = Vec::new();
    write_snapshots_csv(&res.snapshots, &mut csv)?;
    o.write("series.csv", &csv)?;
    if a.dump {
        let grid = match a.mode {
            ModeArg::Radial => DumpGrid::Radial { nr: res.grid_len as u64, dr: res.spacing },
            ModeArg::Cartesian => DumpGrid::Cartesian { n: a.n as u64, h: res.spacing },
        };
        let mut buf = Vec::new();
        write_field_dump(&res.final_state, grid, &mut buf)?;
        o.write("fields.bin", &buf)?;
    }
    let last = res.snapshots.last().expect("at least the initial snapshot");
    let report = json!({
        "t_final": res.final_state.t,
        "steps": res.final_state.steps,
        "dt": res.dt,
        "spacing": res.spacing,
        "grid_len": res.grid_len,
        "blowup_time": res.blowup_time,
        "max_abs_final": res.final_state.max_abs(),
        "energy_initial": res.snapshots[0].energy,
        "energy_final": last.energy,
        "final_components": last.components,
    });
    o.write_json("report.json", &report)?;
    o.finish()?;
    match res.blowup_time {
        Some(t) => {
            eprintln!("blowup at t={t}");
            Ok(ExitCode::from(3))
        }
        None => {
            eprintln!("finished at t={:.6}, {} steps, sup|u|={:.6e}", res.final_state.t, res.final_state.steps, res.final_state.max_abs());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn column(weight: &str) -> Result<fn(&SeriesRow) -> f64> {
    Ok(match weight {
        "one" | "sup_u" => |r| r.sup_u,
        "ut" | "sup_ut" => |r| r.sup_ut,
        "du" | "sup_du" => |r| r.sup_du,
        "kg" | "weighted_kg" => |r| r.weighted_kg,
        "wave" | "weighted_wave" => |r| r.weighted_wave,
        other => bail!("unknown weight {other:?}; expected one, ut, du, kg or wave"),
    })
}

fn decay_fit(csv: &Path, component: usize, weight: &str, window: &str, out: Option<&Path>) -> Result<ExitCode> {
    let pick = column(weight)?;
    let w = parse_list(window)?;
    let [t1, t2] = w[..] else { bail!("window must be T1,T2") };
    let file = std::fs::File::open(csv).with_context(|| format!("opening {}", csv.display()))?;
    let rows = read_series_csv(file)?;
    let series: Vec<(f64, f64)> = rows.iter().filter(|r| r.component == component).map(|r| (r.t, pick(r))).collect();
    if series.is_empty() {
        bail!("no rows for component {component}");
    }
    let mut report = fit_decay_exponent(&series, (t1, t2))?;
    report.component = Some(component);
    report.weight = weight.to_string();
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(dir) = out {
        let bytes = std::fs::read(csv)?;
        let cfg = json!({"component": component, "weight": weight, "window": [t1, t2]});
        let mut o = OutDir::create(dir, RunManifest::new("decay-fit", cfg).with_spec(csv, &bytes))?;
        o.write_json("report.json", &report)?;
        o.finish()?;
    }
    Ok(ExitCode::SUCCESS)
}

const IDENTITY_TOL: f64 = 1e-10;

fn identities(suite: &str, seed: u64, count: usize, out: Option<&Path>) -> Result<ExitCode> {
    let (ok, report) = match suite {
        "frame" => {
            let points = sample_points(seed, count, 50.0, 1e-3, 50.0, false);
            let mut ok = true;
            let mut rows = Vec::new();
            for (k, (phi, psi)) in standard_pairs().iter().enumerate() {
                for r in check_frame_identities(phi, psi, &points)? {
                    let pass = r.max_relative <= IDENTITY_TOL;
                    ok &= pass;
                    println!("pair {k} {:<20} rel {:.2e} {}", r.name, r.max_relative, if pass { "pass" } else { "FAIL" });
                    rows.push(json!({"pair": k, "result": r, "pass": pass}));
                }
            }
            (ok, json!({"tolerance": IDENTITY_TOL, "identities": rows}))
        }
        "nullform" => {
            let points = sample_points(seed, count, 50.0, 1e-3, 50.0, true);
            let mut ok = true;
            let mut rows = Vec::new();
            for (k, (phi, psi)) in standard_pairs().iter().enumerate() {
                for r in check_null_inequality(phi, psi, &points) {
                    ok &= r.passes();
                    let margin = r.margin.map_or("vacuous".to_string(), |m| format!("{m:.3e}"));
                    println!("pair {k} {:<4} margin {margin} {}", r.form, if r.passes() { "pass" } else { "FAIL" });
                    rows.push(json!({"pair": k, "result": r, "pass": r.passes()}));
                }
            }
            (ok, json!({"forms": rows}))
        }
        "sobolev" => {
            let mut ok = true;
            let mut rows = Vec::new();
            for p in dilation_family() {
                let r = klainerman_sobolev_check(&p)?;
                let pass = r.ratio.map_or(true, |x| x.is_finite() && x <= 1.0);
                ok &= pass;
                println!("scale {} ratio {:?} {}", p.scale, r.ratio, if pass { "pass" } else { "FAIL" });
                rows.push(json!({"result": r, "pass": pass}));
            }
            (ok, json!({"profiles": rows}))
        }
        other => bail!("unknown suite {other:?}; expected frame, nullform or sobolev"),
    };
    if let Some(dir) = out {
        let mut m = RunManifest::new("identities", json!({"suite": suite, "points": count}));
        m.seed = Some(seed);
        let mut o = OutDir::create(dir, m)?;
        o.write_json("report.json", &report)?;
        o.finish()?;
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn contrast(epsilon: &str, t_end: f64, dr: f64, out: Option<&Path>) -> Result<ExitCode> {
    let eps = parse_list(epsilon)?;
    let rep = blowup_contrast(&eps, t_end, dr).map_err(|e| anyhow!("{e}"))?;
    let show = |o: &Outcome| match o {
        Outcome::Bounded { sup_u, .. } => format!("bounded (sup|w| {sup_u:.3e})"),
        Outcome::Blowup { t } => format!("blowup at t={t:.3}"),
    };
    for r in &rep.runs {
        println!("eps {:<6} Q0: {:<32} (d_t w)^2: {}", r.epsilon, show(&r.null_form), show(&r.time_derivative_squared));
    }
    println!("crossing time monotone in eps: {}", rep.monotone);
    if let Some(dir) = out {
        let mut o = OutDir::create(dir, RunManifest::new("contrast", json!({"epsilon": eps, "t_end": t_end, "dr": dr})))?;
        o.write_json("report.json", &rep)?;
        o.finish()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze { spec, out } => analyze(&spec, out.as_deref()),
        Command::Simulate(a) => simulate(&a),
        Command::DecayFit { csv, component, weight, window, out } => decay_fit(&csv, component, &weight, &window, out.as_deref()),
        Command::Identities { suite, seed, points, out } => identities(&suite, seed, points, out.as_deref()),
        Command::Contrast { epsilon, t_end, dr, out } => contrast(&epsilon, t_end, dr, out.as_deref()),
        Command::ExportFixtures { out } => {
            for p in export_fixtures(&out)? {
                println!("{}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = nullkg::set_thread_count(n) {
                    eprintln!("warning: {e}");
                }
            }
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer, got {v:?}");
                return ExitCode::from(1);
            }
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
