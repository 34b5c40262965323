//! Power-law fits `norm ≈ e^b t^s` by least squares in log-log coordinates.

use serde::Serialize;

pub const MIN_SAMPLES: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub component: Option<usize>,
    pub weight: String,
    pub window: (f64, f64),
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DecayError {
    #[error("only {found} samples in window [{t1}, {t2}], need at least {MIN_SAMPLES}")]
    TooFewSamples { found: usize, t1: f64, t2: f64 },
    #[error("nonpositive norm {value} at t = {t}")]
    NonPositive { t: f64, value: f64 },
    #[error("window [{t1}, {t2}] lies outside the data range [{lo}, {hi}]")]
    WindowOutsideData { t1: f64, t2: f64, lo: f64, hi: f64 },
}

/// Least-squares slope of `log(norm)` against `log(t)` over samples with
/// `t1 ≤ t ≤ t2`.
pub fn fit_decay_exponent(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayReport, DecayError> {
    let (t1, t2) = window;
    let lo = series.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = series.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if !(t1 > 0.0 && t1 < t2) || t1 < lo - 1e-9 || t2 > hi + 1e-9 {
        return Err(DecayError::WindowOutsideData { t1, t2, lo, hi });
    }
    let mut pts = Vec::new();
    for &(t, v) in series.iter().filter(|p| p.0 >= t1 - 1e-9 && p.0 <= t2 + 1e-9) {
        if !(v > 0.0) {
            return Err(DecayError::NonPositive { t, value: v });
        }
        pts.push((t.ln(), v.ln()));
    }
    if pts.len() < MIN_SAMPLES {
        return Err(DecayError::TooFewSamples { found: pts.len(), t1, t2 });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(DecayReport {
        component: None,
        weight: "one".into(),
        window,
        slope,
        intercept,
        residual_rms: (rss / n).sqrt(),
        samples: pts.len(),
    })
}
