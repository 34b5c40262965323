//! Weighted norms, decay fits and pointwise identity checks.

pub mod decay;
pub mod identities;
pub mod sobolev;
pub mod weights;

pub use decay::{fit_decay_exponent, DecayError, DecayReport};
pub use identities::{
    check_frame_identities, check_null_inequality, sample_points, standard_pairs, IdentityResidual, NullInequalityReport, OriginSample,
    TestFunction,
};
pub use sobolev::{dilation_family, klainerman_sobolev_check, QuadratureError, RadialGaussian, SobolevReport};
pub use weights::{bracket, d_norm, w_minus, w_rho, weight_comparison_constant, weighted_sup, weighted_sup_values, Derivative, WeightSpec};

use serde::Serialize;

use crate::solver::{FieldState, Simulator};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HuygensReport {
    pub t: f64,
    /// Points with `r < t − r0 − 2·spacing`.
    pub points: usize,
    pub interior_max: f64,
}

impl HuygensReport {
    pub fn vacuous(&self) -> bool {
        self.points == 0
    }
}

/// Largest `|u|` strictly inside the backward light cone of data supported
/// in `r < r0`; zero for the free wave equation.
pub fn huygens_check(sim: &Simulator, state: &FieldState, component: usize, r0: f64) -> HuygensReport {
    let cutoff = state.t - r0 - 2.0 * sim.spacing();
    let mut points = 0;
    let mut interior_max = 0.0f64;
    for i in 0..sim.grid_len() {
        if sim.radius(i) < cutoff {
            points += 1;
            interior_max = interior_max.max(state.u[component - 1][i].abs());
        }
    }
    HuygensReport { t: state.t, points, interior_max }
}
