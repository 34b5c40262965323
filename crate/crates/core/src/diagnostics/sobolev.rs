//! Ratio of `sup ⟨x⟩|φ|` to `Σ_{|α|+|β|≤2} ‖∂^α Ω^β φ‖_{L²}` for radial
//! profiles, where every term with a rotation vanishes.

use std::f64::consts::PI;

use serde::Serialize;

/// `amp · exp(−(r/scale)²)`
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialGaussian {
    pub amp: f64,
    pub scale: f64,
}

impl RadialGaussian {
    fn f(&self, r: f64) -> f64 {
        self.amp * (-(r / self.scale).powi(2)).exp()
    }

    fn df(&self, r: f64) -> f64 {
        -2.0 * r / (self.scale * self.scale) * self.f(r)
    }

    /// `f'(r)/r`, smooth at the origin.
    fn df_over_r(&self, r: f64) -> f64 {
        -2.0 / (self.scale * self.scale) * self.f(r)
    }

    fn d2f(&self, r: f64) -> f64 {
        let s2 = self.scale * self.scale;
        (-2.0 / s2 + 4.0 * r * r / (s2 * s2)) * self.f(r)
    }

    fn support(&self) -> f64 {
        12.0 * self.scale
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SobolevReport {
    pub profile: RadialGaussian,
    pub lhs: f64,
    pub rhs: f64,
    /// `None` for the zero function.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("quadrature did not converge: {coarse} vs {fine}")]
pub struct QuadratureError {
    pub coarse: f64,
    pub fine: f64,
}

fn simpson(f: impl Fn(f64) -> f64, b: f64, n: usize) -> f64 {
    let h = b / n as f64;
    let mut acc = f(0.0) + f(b);
    for i in 1..n {
        acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// The sum of the `L²` norms of `φ`, its three first and its six distinct
/// second partial derivatives.
fn rhs(p: &RadialGaussian, n: usize) -> f64 {
    let b = p.support();
    let value = (4.0 * PI * simpson(|r| (p.f(r) * r).powi(2), b, n)).sqrt();
    let first = (4.0 * PI / 3.0 * simpson(|r| (p.df(r) * r).powi(2), b, n)).sqrt();
    // ∂_i∂_j φ = ω_iω_j f'' + (δ_ij − ω_iω_j) f'/r; sphere averages of
    // ω_i⁴, ω_i²(1−ω_i²), (1−ω_i²)², ω_i²ω_j² are 1/5, 2/15, 8/15, 1/15.
    let diag = simpson(
        |r| {
            let (a, c) = (p.d2f(r), p.df_over_r(r));
            4.0 * PI * (a * a / 5.0 + 2.0 * a * c * 2.0 / 15.0 + c * c * 8.0 / 15.0) * r * r
        },
        b,
        n,
    )
    .sqrt();
    let off = (4.0 * PI / 15.0 * simpson(|r| ((p.d2f(r) - p.df_over_r(r)) * r).powi(2), b, n)).sqrt();
    value + 3.0 * first + 3.0 * diag + 3.0 * off
}

/// Unit Gaussians at scales 1, 2 and 4.
pub fn dilation_family() -> Vec<RadialGaussian> {
    [1.0, 2.0, 4.0].iter().map(|&scale| RadialGaussian { amp: 1.0, scale }).collect()
}

pub fn klainerman_sobolev_check(p: &RadialGaussian) -> Result<SobolevReport, QuadratureError> {
    let coarse = rhs(p, 4000);
    let fine = rhs(p, 8000);
    if (coarse - fine).abs() > 1e-9 * fine.abs().max(f64::MIN_POSITIVE) {
        return Err(QuadratureError { coarse, fine });
    }
    let b = p.support();
    let lhs = (0..=100_000).map(|i| i as f64 * b / 100_000.0).map(|r| r.hypot(1.0) * p.f(r).abs()).fold(0.0, f64::max);
    let ratio = if fine == 0.0 { None } else { Some(lhs / fine) };
    Ok(SobolevReport { profile: *p, lhs, rhs: fine, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_vacuous() {
        let r = klainerman_sobolev_check(&RadialGaussian { amp: 0.0, scale: 1.0 }).unwrap();
        assert_eq!(r.ratio, None);
    }

    #[test]
    fn second_derivative_norms_match_cartesian_quadrature() {
        // Trapezoid sums on a cube are spectrally accurate for Gaussians.
        let p = RadialGaussian { amp: 1.0, scale: 1.0 };
        let n = 121;
        let l = 6.0;
        let h = 2.0 * l / (n - 1) as f64;
        let (mut d11, mut d12) = (0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let x = [-l + i as f64 * h, -l + j as f64 * h, -l + k as f64 * h];
                    let r2: f64 = x.iter().map(|v| v * v).sum();
                    let f = (-r2).exp();
                    d11 += ((4.0 * x[0] * x[0] - 2.0) * f).powi(2);
                    d12 += (4.0 * x[0] * x[1] * f).powi(2);
                }
            }
        }
        let (d11, d12) = ((d11 * h * h * h).sqrt(), (d12 * h * h * h).sqrt());
        let b = p.support();
        let diag = simpson(
            |r| {
                let (a, c) = (p.d2f(r), p.df_over_r(r));
                4.0 * PI * (a * a / 5.0 + 4.0 * a * c / 15.0 + c * c * 8.0 / 15.0) * r * r
            },
            b,
            4000,
        )
        .sqrt();
        let off = (4.0 * PI / 15.0 * simpson(|r| ((p.d2f(r) - p.df_over_r(r)) * r).powi(2), b, 4000)).sqrt();
        assert!((diag - d11).abs() < 1e-8 * d11, "{diag} {d11}");
        assert!((off - d12).abs() < 1e-8 * d12, "{off} {d12}");
    }

    #[test]
    fn dilation_family_is_bounded() {
        let ratios: Vec<f64> = [1.0, 2.0, 4.0]
            .iter()
            .map(|&s| klainerman_sobolev_check(&RadialGaussian { amp: 1.0, scale: s }).unwrap().ratio.unwrap())
            .collect();
        assert!(ratios.iter().all(|r| r.is_finite() && *r > 0.0 && *r < 1.0), "{ratios:?}");
    }
}
