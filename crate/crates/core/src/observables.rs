//! Entropies, imbalance and late-time saturation analysis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{expectation_sigma_z, partial_trace, von_neumann_entropy, StateVector, C64};

/// Von Neumann entropy (bits) of sites `1..=⌊L/2⌋`.
pub fn half_chain_entropy(psi: &StateVector) -> Result<f64> {
    let cut = psi.sites() / 2;
    if cut == 0 {
        return Ok(0.0);
    }
    let keep: Vec<usize> = (1..=cut).collect();
    von_neumann_entropy(&partial_trace(psi, &keep)?)
}

/// `(1 − |φ|²)/2`
pub fn linear_entropy(phi: C64) -> f64 {
    ((1.0 - phi.norm_sqr()) / 2.0).clamp(0.0, 0.5)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Imbalance {
    /// `Σ_i (−1)^{i+1} ⟨σ_z,i⟩`, in `[−L, L]`.
    pub raw: f64,
    /// `raw / L`, so the Néel state has 1.
    pub normalized: f64,
}

pub fn imbalance(psi: &StateVector) -> Imbalance {
    let l = psi.sites();
    let raw: f64 = (1..=l)
        .map(|i| {
            let z = expectation_sigma_z(psi, i).expect("site in range");
            if i % 2 == 1 {
                z
            } else {
                -z
            }
        })
        .sum();
    Imbalance { raw, normalized: raw / l as f64 }
}

/// Sampled observable `Q(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub label: String,
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(label: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), found: values.len() });
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter("times must be strictly increasing".into()));
        }
        Ok(Self { label: label.into(), times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Linear interpolation; `t` must lie inside the sampled range.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        let k = self.times.partition_point(|&x| x < t);
        if k == self.times.len() {
            return None;
        }
        if self.times[k] == t {
            return Some(self.values[k]);
        }
        if k == 0 {
            return None;
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        Some(v0 + (v1 - v0) * (t - t0) / (t1 - t0))
    }
}

/// Time average `(1/(t_f − t_i)) ∫ Q dt` by the trapezoid rule over the
/// samples inside the window, with interpolated endpoint values.
pub fn saturation_value(s: &TimeSeries, t_i: f64, t_f: f64) -> Result<f64> {
    if !(t_i < t_f) {
        return Err(Error::InvalidWindow(format!("[{t_i}, {t_f}] is empty")));
    }
    let (Some(&first), Some(&last)) = (s.times.first(), s.times.last()) else {
        return Err(Error::InvalidWindow("series is empty".into()));
    };
    if t_i < first || t_f > last {
        return Err(Error::InvalidWindow(format!(
            "[{t_i:e}, {t_f:e}] outside sampled range [{first:e}, {last:e}]"
        )));
    }
    let inside = s.times.iter().filter(|&&t| t >= t_i && t <= t_f).count();
    if inside < 2 {
        return Err(Error::InvalidWindow(format!("only {inside} samples inside [{t_i:e}, {t_f:e}]")));
    }

    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(inside + 2);
    pts.push((t_i, s.interpolate(t_i).expect("inside range")));
    pts.extend(
        s.times
            .iter()
            .zip(&s.values)
            .filter(|(&t, _)| t > t_i && t < t_f)
            .map(|(&t, &v)| (t, v)),
    );
    pts.push((t_f, s.interpolate(t_f).expect("inside range")));

    let integral: f64 = pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum();
    Ok(integral / (t_f - t_i))
}

/// Earliest times at which a series sits within `ε` of its saturation value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaturationTime {
    /// First sample after which every later sample stays inside the band.
    pub robust: Option<f64>,
    /// First sample inside the band.
    pub first_crossing: Option<f64>,
}

impl SaturationTime {
    pub fn is_saturated(&self) -> bool {
        self.robust.is_some()
    }
}

pub fn saturation_time(s: &TimeSeries, q_sat: f64, epsilon: f64) -> Result<SaturationTime> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {epsilon}")));
    }
    let inside: Vec<bool> = s.values.iter().map(|v| (v - q_sat).abs() < epsilon).collect();
    let first_crossing = inside.iter().position(|&b| b).map(|k| s.times[k]);
    // start of the trailing run of in-band samples
    let tail = inside.iter().rev().take_while(|&&b| b).count();
    let robust = (tail > 0).then(|| s.times[s.len() - tail]);
    Ok(SaturationTime { robust, first_crossing })
}
