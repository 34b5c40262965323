//! Pointwise checks of the frame and null-form identities with analytically
//! differentiated test functions, so residuals are pure roundoff.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::weights::bracket;

/// Closed-form test function of `(t, x)` with exact first derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    /// `amp · exp(−|x−c|²/width²) · cos(freq · t)`
    Gaussian { amp: f64, center: [f64; 3], width: f64, freq: f64 },
    /// `cos(k·x − ωt + phase)`
    PlaneWave { k: [f64; 3], omega: f64, phase: f64 },
    Constant { value: f64 },
}

impl TestFunction {
    pub fn gaussian(width: f64) -> Self {
        TestFunction::Gaussian { amp: 1.0, center: [0.0; 3], width, freq: 0.0 }
    }

    pub fn value(&self, t: f64, x: [f64; 3]) -> f64 {
        match *self {
            TestFunction::Gaussian { amp, center, width, freq } => {
                let s: f64 = (0..3).map(|i| (x[i] - center[i]).powi(2)).sum::<f64>() / (width * width);
                amp * (-s).exp() * (freq * t).cos()
            }
            TestFunction::PlaneWave { k, omega, phase } => (k[0] * x[0] + k[1] * x[1] + k[2] * x[2] - omega * t + phase).cos(),
            TestFunction::Constant { value } => value,
        }
    }

    /// `(∂_t, ∂_1, ∂_2, ∂_3)`
    pub fn grad(&self, t: f64, x: [f64; 3]) -> [f64; 4] {
        match *self {
            TestFunction::Gaussian { amp, center, width, freq } => {
                let s: f64 = (0..3).map(|i| (x[i] - center[i]).powi(2)).sum::<f64>() / (width * width);
                let e = amp * (-s).exp();
                let g = e * (freq * t).cos();
                let k = -2.0 / (width * width);
                [-freq * e * (freq * t).sin(), k * (x[0] - center[0]) * g, k * (x[1] - center[1]) * g, k * (x[2] - center[2]) * g]
            }
            TestFunction::PlaneWave { k, omega, phase } => {
                let s = (k[0] * x[0] + k[1] * x[1] + k[2] * x[2] - omega * t + phase).sin();
                [omega * s, -k[0] * s, -k[1] * s, -k[2] * s]
            }
            TestFunction::Constant { .. } => [0.0; 4],
        }
    }
}

/// First-order vector-field data of one function at one point.
#[derive(Clone, Copy, Debug)]
struct Frame {
    t: f64,
    r: f64,
    x: [f64; 3],
    omega: [f64; 3],
    value: f64,
    dt: f64,
    grad: [f64; 3],
    dr: f64,
    rot: [f64; 3],
    boost: [f64; 3],
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl Frame {
    fn new(f: &TestFunction, t: f64, x: [f64; 3]) -> Self {
        let r = norm(&x);
        let omega = [x[0] / r, x[1] / r, x[2] / r];
        let d = f.grad(t, x);
        let grad = [d[1], d[2], d[3]];
        let dr = omega[0] * grad[0] + omega[1] * grad[1] + omega[2] * grad[2];
        Frame {
            t,
            r,
            x,
            omega,
            value: f.value(t, x),
            dt: d[0],
            grad,
            dr,
            rot: cross(x, grad),
            boost: [x[0] * d[0] + t * grad[0], x[1] * d[0] + t * grad[1], x[2] * d[0] + t * grad[2]],
        }
    }

    fn lr(&self) -> f64 {
        self.r * self.dt + self.t * self.dr
    }

    fn scaling(&self) -> f64 {
        self.t * self.dt + self.x[0] * self.grad[0] + self.x[1] * self.grad[1] + self.x[2] * self.grad[2]
    }

    fn plus(&self) -> f64 {
        self.dt + self.dr
    }

    fn minus(&self) -> f64 {
        self.dt - self.dr
    }

    /// `|φ| + Σ|Ωφ| + Σ|Lφ| + Σ|∂φ|`
    fn z_norm(&self) -> f64 {
        self.value.abs() + l1(&self.rot) + l1(&self.boost) + self.d_norm()
    }

    fn d_norm(&self) -> f64 {
        self.dt.abs() + l1(&self.grad)
    }
}

fn l1(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub statement: &'static str,
    pub max_relative: f64,
    pub max_absolute: f64,
    pub points: usize,
}

/// `(lhs, rhs, scale)` for each identity at one point; `scale` is the sum of
/// the magnitudes of the additive pieces, so cancellation does not inflate
/// the relative residual.
type Sides = (Vec<f64>, Vec<f64>, f64);

const SUBNORMAL_SCALE: f64 = 1e-290;

const IDENTITIES: [(&str, &str); 9] = [
    ("gradient_frame", "∇φ = ω∂_rφ − r⁻¹ ω×Ωφ"),
    ("boosted_frame", "(t+r)(∇φ − ω∂_rφ) = −ω×(Ωφ + ω×Lφ)"),
    ("rotation_boost", "t r⁻¹ Ωφ = ω×Lφ"),
    ("q0r_boost", "(t+r)Q_0r(φ,ψ) = (∂_tφ−∂_rφ)L_rψ − L_rφ(∂_tψ−∂_rψ)"),
    ("q0_plus_minus", "Q_0^rad(φ,ψ) = ½(∂₊φ∂₋ψ + ∂₋φ∂₊ψ)"),
    ("q0r_plus", "Q_0r(φ,ψ) = ∂₊φ∂_rψ − ∂_rφ∂₊ψ"),
    ("plus_scaling_boost", "∂₊ = (t+r)⁻¹(S + L_r)"),
    ("plus_scaling", "∂₊ = r⁻¹(S − (t−r)∂_t)"),
    ("plus_boost", "∂₊ = (t+r)⁻¹(2L_r + (t−r)∂_t − (t−r)∂_r)"),
];

fn identity_sides(a: &Frame, b: &Frame) -> [Sides; 9] {
    let (t, r, w) = (a.t, a.r, a.omega);
    let tr = t + r;

    let wxrot = cross(w, a.rot);
    let gradient_frame = (
        a.grad.to_vec(),
        (0..3).map(|i| w[i] * a.dr - wxrot[i] / r).collect(),
        norm(&a.grad) + a.dr.abs() + norm(&wxrot) / r,
    );

    let inner = {
        let wxl = cross(w, a.boost);
        [a.rot[0] + wxl[0], a.rot[1] + wxl[1], a.rot[2] + wxl[2]]
    };
    let outer = cross(w, inner);
    let boosted_frame = (
        (0..3).map(|i| tr * (a.grad[i] - w[i] * a.dr)).collect(),
        outer.iter().map(|v| -v).collect(),
        tr * (norm(&a.grad) + a.dr.abs()) + norm(&a.rot) + norm(&a.boost),
    );

    let wxl = cross(w, a.boost);
    let rotation_boost = (a.rot.iter().map(|v| t / r * v).collect(), wxl.to_vec(), t / r * norm(&a.rot) + norm(&a.boost));

    let q0r = a.dt * b.dr - a.dr * b.dt;
    let q0r_boost = (
        vec![tr * q0r],
        vec![a.minus() * b.lr() - a.lr() * b.minus()],
        tr * (a.dt * b.dr).abs() + tr * (a.dr * b.dt).abs() + (a.minus() * b.lr()).abs() + (a.lr() * b.minus()).abs(),
    );

    let q0 = a.dt * b.dt - a.dr * b.dr;
    let q0_plus_minus = (
        vec![q0],
        vec![0.5 * (a.plus() * b.minus() + a.minus() * b.plus())],
        (a.dt * b.dt).abs() + (a.dr * b.dr).abs() + (a.plus() * b.minus()).abs() + (a.minus() * b.plus()).abs(),
    );

    let q0r_plus = (
        vec![q0r],
        vec![a.plus() * b.dr - a.dr * b.plus()],
        (a.dt * b.dr).abs() + (a.dr * b.dt).abs() + (a.plus() * b.dr).abs() + (a.dr * b.plus()).abs(),
    );

    let plus_scaling_boost =
        (vec![a.plus()], vec![(a.scaling() + a.lr()) / tr], a.dt.abs() + a.dr.abs() + (a.scaling().abs() + a.lr().abs()) / tr);

    let plus_scaling = (
        vec![a.plus()],
        vec![(a.scaling() - (t - r) * a.dt) / r],
        a.dt.abs() + a.dr.abs() + (a.scaling().abs() + ((t - r) * a.dt).abs()) / r,
    );

    let plus_boost = (
        vec![a.plus()],
        vec![(2.0 * a.lr() + (t - r) * a.dt - (t - r) * a.dr) / tr],
        a.dt.abs() + a.dr.abs() + (2.0 * a.lr().abs() + ((t - r) * a.dt).abs() + ((t - r) * a.dr).abs()) / tr,
    );

    [gradient_frame, boosted_frame, rotation_boost, q0r_boost, q0_plus_minus, q0r_plus, plus_scaling_boost, plus_scaling, plus_boost]
}

/// Pairs `(φ, ψ)` the identity and null-form suites run on: a focused
/// Gaussian against itself, an off-centre Gaussian against a plane wave,
/// and two counter-propagating plane waves.
pub fn standard_pairs() -> Vec<(TestFunction, TestFunction)> {
    let g = TestFunction::Gaussian { amp: 1.0, center: [0.0; 3], width: 1.0, freq: 1.0 };
    vec![
        (g, g),
        (
            TestFunction::Gaussian { amp: 2.0, center: [0.5, -0.3, 0.2], width: 3.0, freq: 0.7 },
            TestFunction::PlaneWave { k: [0.6, -0.8, 0.3], omega: 1.1, phase: 0.3 },
        ),
        (
            TestFunction::PlaneWave { k: [1.0, 0.0, 0.0], omega: 1.0, phase: 0.0 },
            TestFunction::PlaneWave { k: [1.0, 0.0, 0.0], omega: -1.0, phase: 0.0 },
        ),
    ]
}

/// Random sample points `(t, x)` with `r_min ≤ |x| ≤ r_max` and
/// `0 ≤ t ≤ t_max`; with `inside_cone`, `t ≥ |x|` as well.
pub fn sample_points(seed: u64, count: usize, t_max: f64, r_min: f64, r_max: f64, inside_cone: bool) -> Vec<(f64, [f64; 3])> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r: f64 = rng.gen_range(r_min..=r_max);
            let z: f64 = rng.gen_range(-1.0..=1.0);
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let s = (1.0 - z * z).sqrt();
            let x = [r * s * phi.cos(), r * s * phi.sin(), r * z];
            let t = if inside_cone { rng.gen_range(r.min(t_max)..=t_max) } else { rng.gen_range(0.0..=t_max) };
            (t, x)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("sample point {index} has r = 0, where ω is undefined")]
pub struct OriginSample {
    pub index: usize,
}

/// Maximum residual of every frame identity over the points.
pub fn check_frame_identities(
    phi: &TestFunction,
    psi: &TestFunction,
    points: &[(f64, [f64; 3])],
) -> Result<Vec<IdentityResidual>, OriginSample> {
    let mut out: Vec<IdentityResidual> = IDENTITIES
        .iter()
        .map(|&(name, statement)| IdentityResidual { name, statement, max_relative: 0.0, max_absolute: 0.0, points: points.len() })
        .collect();
    for (index, &(t, x)) in points.iter().enumerate() {
        if norm(&x) == 0.0 {
            return Err(OriginSample { index });
        }
        let a = Frame::new(phi, t, x);
        let b = Frame::new(psi, t, x);
        for (res, (lhs, rhs, scale)) in out.iter_mut().zip(identity_sides(&a, &b)) {
            let abs = lhs.iter().zip(&rhs).map(|(l, r)| (l - r).abs()).fold(0.0, f64::max);
            // Subnormal pieces carry too few bits for a relative comparison.
            let rel = if abs == 0.0 || scale < SUBNORMAL_SCALE { 0.0 } else { abs / scale };
            res.max_absolute = res.max_absolute.max(abs);
            res.max_relative = res.max_relative.max(rel);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NullInequalityReport {
    pub form: String,
    /// `inf RHS/LHS` with unit constant; `None` when `LHS ≡ 0`.
    pub margin: Option<f64>,
    /// `1 / margin`, the smallest constant making the bound hold on the sample.
    pub empirical_constant: Option<f64>,
    pub points_used: usize,
}

impl NullInequalityReport {
    pub fn passes(&self) -> bool {
        self.margin.map_or(true, |m| m > 0.0 && m.is_finite())
    }

    pub fn vacuous(&self) -> bool {
        self.margin.is_none()
    }
}

fn null_forms(a: &Frame, b: &Frame) -> Vec<(String, f64)> {
    let da = [a.dt, a.grad[0], a.grad[1], a.grad[2]];
    let db = [b.dt, b.grad[0], b.grad[1], b.grad[2]];
    let mut out = vec![("Q0".to_string(), da[0] * db[0] - da[1] * db[1] - da[2] * db[2] - da[3] * db[3])];
    for i in 0..4 {
        for j in i + 1..4 {
            out.push((format!("Q{i}{j}"), da[i] * db[j] - da[j] * db[i]));
        }
    }
    out
}

/// Zeroth-order weighted null-form bound
/// `⟨t+r⟩|Q(φ,ψ)| ≤ C(2|φ|₁|∂ψ| + 2|∂φ||ψ|₁ + 2⟨t−r⟩|∂φ||∂ψ|)`
/// with `|·|₁` summing `|Ω·|`, `|L·|`, `|∂·|` and the value.
pub fn check_null_inequality(phi: &TestFunction, psi: &TestFunction, points: &[(f64, [f64; 3])]) -> Vec<NullInequalityReport> {
    let mut reports: Vec<NullInequalityReport> = Vec::new();
    for &(t, x) in points {
        if norm(&x) == 0.0 {
            continue;
        }
        let a = Frame::new(phi, t, x);
        let b = Frame::new(psi, t, x);
        let r = a.r;
        let rhs = 2.0 * a.z_norm() * b.d_norm() + 2.0 * a.d_norm() * b.z_norm() + 2.0 * bracket(t - r) * a.d_norm() * b.d_norm();
        for (k, (name, q)) in null_forms(&a, &b).into_iter().enumerate() {
            if reports.len() <= k {
                reports.push(NullInequalityReport { form: name, margin: None, empirical_constant: None, points_used: 0 });
            }
            let lhs = bracket(t + r) * q.abs();
            if lhs > 0.0 {
                let rep = &mut reports[k];
                let ratio = rhs / lhs;
                rep.margin = Some(rep.margin.map_or(ratio, |m| m.min(ratio)));
                rep.points_used += 1;
            }
        }
    }
    for rep in &mut reports {
        rep.empirical_constant = rep.margin.map(|m| 1.0 / m);
    }
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_gaussian_has_no_rotation() {
        let f = TestFunction::gaussian(1.0);
        for (t, x) in sample_points(1, 100, 5.0, 0.1, 3.0, false) {
            let a = Frame::new(&f, t, x);
            assert!(norm(&a.rot) <= 1e-15);
            for i in 0..3 {
                assert!((a.grad[i] - a.omega[i] * a.dr).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn plane_wave_q0_vanishes() {
        let f = TestFunction::PlaneWave { k: [1.0, 0.0, 0.0], omega: 1.0, phase: 0.0 };
        for (t, x) in sample_points(2, 100, 10.0, 0.1, 10.0, false) {
            let a = Frame::new(&f, t, x);
            let q0 = a.dt * a.dt - norm(&a.grad).powi(2);
            assert!(q0.abs() < 1e-15);
        }
    }

    #[test]
    fn identities_hold() {
        let f = TestFunction::Gaussian { amp: 1.0, center: [0.3, -0.2, 0.1], width: 1.5, freq: 1.0 };
        let g = TestFunction::PlaneWave { k: [0.5, 1.0, -0.3], omega: 1.2, phase: 0.4 };
        let pts = sample_points(7, 1000, 50.0, 1e-2, 20.0, false);
        for res in check_frame_identities(&f, &g, &pts).unwrap() {
            assert!(res.max_relative <= 1e-10, "{}: {}", res.name, res.max_relative);
        }
    }

    #[test]
    fn origin_rejected() {
        let f = TestFunction::gaussian(1.0);
        assert_eq!(check_frame_identities(&f, &f, &[(1.0, [0.0; 3])]), Err(OriginSample { index: 0 }));
    }

    #[test]
    fn constant_is_vacuous() {
        let f = TestFunction::gaussian(1.0);
        let c = TestFunction::Constant { value: 2.0 };
        let reps = check_null_inequality(&f, &c, &sample_points(3, 50, 10.0, 0.1, 5.0, true));
        assert!(reps.iter().all(|r| r.vacuous() && r.passes()));
    }

    #[test]
    fn crossing_plane_waves() {
        let f = TestFunction::PlaneWave { k: [1.0, 0.0, 0.0], omega: 1.0, phase: 0.0 };
        let g = TestFunction::PlaneWave { k: [1.0, 0.0, 0.0], omega: -1.0, phase: 0.0 };
        let reps = check_null_inequality(&f, &g, &sample_points(4, 1000, 50.0, 0.1, 50.0, true));
        let q0 = &reps[0];
        assert!(q0.points_used > 900);
        assert!(q0.passes() && q0.margin.unwrap() > 0.0);
    }
}
