//! wasm-bindgen entry points for the static demo in `www/`.
//!
//! Every export returns a JSON string; failures come back as `{"error": ...}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use nullkg::diagnostics::fit_decay_exponent;
use nullkg::examples::catalog;
use nullkg::experiments::{contrast_config, contrast_data};
use nullkg::null_analyzer::analyze_system;
use nullkg::solver::{run_simulation, InitialData, Mode, Profile, SimulationResult, SolverConfig};
use nullkg::system_model::SystemSpec;

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

#[wasm_bindgen]
pub fn fixture_names() -> String {
    let names: Vec<&str> = catalog::catalog().iter().chain(&catalog::extras()).map(|f| f.name).collect();
    json!(names).to_string()
}

#[wasm_bindgen]
pub fn fixture_spec(name: &str) -> String {
    match catalog::fixture(name) {
        Some(f) => f.spec.to_json_string(),
        None => error(format!("no fixture named {name:?}")),
    }
}

#[wasm_bindgen]
pub fn analyze(spec_json: &str) -> String {
    let spec = match SystemSpec::from_json_str(spec_json) {
        Ok(s) => s,
        Err(e) => return error(e),
    };
    let report = analyze_system(&spec);
    let (i1, i2) = report.partition_sets().unzip();
    json!({
        "applies": report.applies(),
        "null_condition": report.null_condition_holds(),
        "i1": i1,
        "i2": i2,
        "report": report.to_json(),
    })
    .to_string()
}

fn series(res: &SimulationResult) -> Value {
    let t: Vec<f64> = res.snapshots.iter().map(|s| s.t).collect();
    let sup: Vec<f64> = res.snapshots.iter().map(|s| s.components[0].sup_u).collect();
    json!({ "t": t, "sup_u": sup, "blowup_time": res.blowup_time })
}

/// `□w = Q0(w, w)` and `□w = (∂_t w)²` from the same data.
#[wasm_bindgen]
pub fn contrast(epsilon: f64, t_end: f64) -> String {
    let cfg = contrast_config(epsilon, t_end, 0.04);
    let data = contrast_data();
    let run = |spec: SystemSpec| run_simulation(&spec, &data, &cfg);
    match (run(catalog::null_q0()), run(catalog::john_blowup())) {
        (Ok(a), Ok(b)) => json!({ "epsilon": epsilon, "null_form": series(&a), "time_derivative_squared": series(&b) }).to_string(),
        (Err(e), _) | (_, Err(e)) => error(e),
    }
}

/// Free Klein-Gordon run with a power-law fit of `sup|u|` on the second half.
#[wasm_bindgen]
pub fn decay(mass: f64, t_end: f64) -> String {
    let cfg = SolverConfig {
        t_end,
        epsilon: 1.0,
        mode: Mode::Radial { dr: 0.1, r_max: None },
        snapshot_interval: 0.5,
        ..Default::default()
    };
    let data = InitialData::uniform(Profile::Gaussian { r0: 1.0 }, 1, 1.0, 0.0);
    let res = match run_simulation(&catalog::free_kg(mass), &data, &cfg) {
        Ok(r) => r,
        Err(e) => return error(e),
    };
    let pts = res.series(1, |c| c.sup_u);
    match fit_decay_exponent(&pts, (0.5 * t_end, t_end)) {
        Ok(fit) => json!({ "series": series(&res), "slope": fit.slope, "intercept": fit.intercept, "window": fit.window }).to_string(),
        Err(e) => error(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn fixtures_analyze_in_the_demo() {
        let names = parse(&fixture_names());
        assert!(names.as_array().unwrap().len() >= 7);
        let kgz = parse(&analyze(&fixture_spec("kgz_reduced")));
        assert_eq!(kgz["applies"], true);
        assert_eq!(kgz["i2"], json!([1]));
        assert_eq!(parse(&analyze(&fixture_spec("kata_raw")))["applies"], false);
        assert!(parse(&fixture_spec("nope"))["error"].is_string());
        assert!(parse(&analyze("{"))["error"].is_string());
    }

    #[test]
    fn contrast_separates_the_two_nonlinearities() {
        let v = parse(&contrast(0.3, 4.0));
        assert!(v["null_form"]["blowup_time"].is_null());
        assert!(v["time_derivative_squared"]["blowup_time"].as_f64().unwrap() < 2.0);
    }

    #[test]
    fn decay_slope_is_near_three_halves() {
        let v = parse(&decay(1.0, 60.0));
        let slope = v["slope"].as_f64().unwrap();
        assert!((slope + 1.5).abs() < 0.2, "{slope}");
        assert!(parse(&decay(1.0, 5.0))["error"].is_string());
    }
}
