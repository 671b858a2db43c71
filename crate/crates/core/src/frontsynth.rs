//! Space-time motion of the perturbed crack front, synthesised from
//! dispersion roots: `φ(x₂, t) = Σ Re[A e^{i(k₂x₂ − ωt)}]`.
//!
//! A real root gives a neutral wave travelling at `Re ω / k₂`; a root with
//! `Im ω = −γ < 0` gives a wave whose amplitude decays like `e^{−γt}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub k2: f64,
    pub amplitude: Complex64,
    pub omega: Complex64,
    /// `|D(ω)|` of the dispersion relation the root came from; zero for
    /// hand-built modes.
    #[serde(default)]
    pub residual: f64,
}

impl Mode {
    pub fn new(k2: f64, amplitude: Complex64, omega: Complex64) -> Self {
        Self {
            k2,
            amplitude,
            omega,
            residual: 0.0,
        }
    }
}

/// Uniform sampling of `[x_min, x_max)`; the window is treated as periodic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub samples: usize,
}

impl Window {
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.samples as f64
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.samples)
            .map(|j| self.x_min + j as f64 * self.dx())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalFront {
    pub modes: Vec<Mode>,
    pub window: Window,
    pub times: Vec<f64>,
    /// Modes whose residual exceeds this are rejected.
    pub residual_tol: f64,
}

/// Sampled front displacement, one row per time.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontField {
    pub x: Vec<f64>,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl FrontField {
    /// Root-mean-square over `x₂` at every time.
    pub fn rms_envelope(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|row| (row.iter().map(|v| v * v).sum::<f64>() / row.len() as f64).sqrt())
            .collect()
    }
}

pub fn synthesize(front: &ModalFront) -> Result<FrontField> {
    if front.modes.is_empty() {
        return Err(Error::invalid("modes", "at least one mode is required"));
    }
    if front.window.samples < 2 || !(front.window.x_max > front.window.x_min) {
        return Err(Error::invalid(
            "window",
            "need x_min < x_max and at least 2 samples",
        ));
    }
    for (idx, mode) in front.modes.iter().enumerate() {
        if !(mode.residual <= front.residual_tol) {
            return Err(Error::invalid(
                "modes",
                format!(
                    "mode {idx} (k2 = {}, omega = {}) has residual {:e} above tolerance {:e}",
                    mode.k2, mode.omega, mode.residual, front.residual_tol
                ),
            ));
        }
    }
    let x = front.window.positions();
    let i = Complex64::i();
    let values = front
        .times
        .iter()
        .map(|&t| {
            x.iter()
                .map(|&xj| {
                    front
                        .modes
                        .iter()
                        .map(|m| (m.amplitude * (i * (m.k2 * xj - m.omega * t)).exp()).re)
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(FrontField {
        x,
        times: front.times.clone(),
        values,
    })
}

/// Least-squares slope of `ln(rms)` against time; `−γ` for a single
/// decaying mode.
pub fn fit_decay_rate(field: &FrontField) -> Result<f64> {
    let env = field.rms_envelope();
    if env.len() < 2 || env.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Measurement(
            "envelope must be positive at two or more times".into(),
        ));
    }
    let n = env.len() as f64;
    let t_mean = field.times.iter().sum::<f64>() / n;
    let y: Vec<f64> = env.iter().map(|e| e.ln()).collect();
    let y_mean = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, yi) in field.times.iter().zip(&y) {
        sxy += (t - t_mean) * (yi - y_mean);
        sxx += (t - t_mean) * (t - t_mean);
    }
    Ok(sxy / sxx)
}

/// Circular cross-correlation lag (in samples, sub-sample refined) that
/// best maps row `a` onto row `b`.
///
/// A periodic profile correlates equally well at every whole-wavelength
/// shift, so among local maxima of `|corr|` within `1e−3` of the global
/// maximum the smallest shift wins. The sign of the correlation is ignored
/// so a standing wave passing through zero does not register as a
/// half-wavelength jump.
fn correlation_lag(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as i64;
    let norm = (a.iter().map(|v| v * v).sum::<f64>() * b.iter().map(|v| v * v).sum::<f64>()).sqrt();
    if !(norm > 0.0) {
        return None;
    }
    let corr = |lag: i64| -> f64 {
        let mut s = 0.0;
        for (j, aj) in a.iter().enumerate() {
            s += aj * b[(j as i64 + lag).rem_euclid(n) as usize];
        }
        (s / norm).abs()
    };
    let half = n / 2;
    let lags: Vec<i64> = (-(half - 1)..=half).collect();
    let values: Vec<f64> = lags.iter().map(|&l| corr(l)).collect();
    let max = values.iter().cloned().fold(0.0, f64::max);
    let len = values.len();
    let best = (0..len)
        .filter(|&k| {
            let (prev, next) = (values[(k + len - 1) % len], values[(k + 1) % len]);
            values[k] >= prev && values[k] >= next && values[k] >= max * (1.0 - 1e-3)
        })
        .map(|k| lags[k])
        .min_by_key(|l| l.abs())
        .unwrap_or(0);
    let (cm, c0, cp) = (corr(best - 1), corr(best), corr(best + 1));
    let denom = cm - 2.0 * c0 + cp;
    let offset = if denom < 0.0 {
        0.5 * (cm - cp) / denom
    } else {
        0.0
    };
    Some(best as f64 + offset.clamp(-0.5, 0.5))
}

/// Propagation speed from the mean cross-correlation shift between
/// consecutive time slices.
pub fn measure_speed(field: &FrontField) -> Result<f64> {
    if field.values.len() < 2 || field.x.len() < 2 {
        return Err(Error::Measurement(
            "need at least two time slices and two positions".into(),
        ));
    }
    let dx = field.x[1] - field.x[0];
    let mut speeds = Vec::new();
    for (k, pair) in field.values.windows(2).enumerate() {
        let Some(lag) = correlation_lag(&pair[0], &pair[1]) else {
            continue;
        };
        let dt = field.times[k + 1] - field.times[k];
        speeds.push(lag * dx / dt);
    }
    if speeds.is_empty() {
        return Err(Error::Measurement("field vanishes identically".into()));
    }
    Ok(speeds.iter().sum::<f64>() / speeds.len() as f64)
}
