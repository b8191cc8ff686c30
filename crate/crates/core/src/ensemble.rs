//! Seeded, parallel disorder-ensemble sweeps.
//!
//! Realization `r` of a run with master seed `m` and `N` superposed profiles
//! draws all of its `N` profiles from one ChaCha8 stream seeded with
//! [`realization_seed`]`(m, N, r)`. The child seed is a SplitMix64 output at
//! counter position `r`, so adding realizations never changes earlier ones
//! and runs with different `N` use unrelated streams.
//!
//! Per-realization traces are collected in realization order and reduced
//! with a fixed pairwise tree, which makes the result independent of how
//! the work was scheduled across threads.

use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::StateVector;
use crate::liom::{plus_product_state, LiomCouplings};
use crate::observables::{half_chain_entropy, imbalance, TimeSeries};
use crate::superpose::{effective_dephasing_factor, SuperpositionSpec};
use crate::xxz::{neel_state, sample_fields, SzSector, XxzParams};

/// Largest chain the ensemble runner accepts.
pub const MAX_ENSEMBLE_SITES: usize = 12;
/// Upper bound on `N · n_realizations` for one run.
pub const MAX_PROFILE_DRAWS: usize = 10_000_000;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    Liom { sites: usize, coupling_scale: f64, xi: f64 },
    Xxz(XxzParams),
}

impl ModelSpec {
    pub fn sites(&self) -> usize {
        match self {
            ModelSpec::Liom { sites, .. } => *sites,
            ModelSpec::Xxz(p) => p.sites,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Liom { .. } => "liom",
            ModelSpec::Xxz(_) => "xxz",
        }
    }

    /// Initial state: the all-plus product state for the l-bit model, the
    /// Néel state for the XXZ chain.
    pub fn initial_state(&self) -> Result<StateVector> {
        match self {
            ModelSpec::Liom { sites, .. } => plus_product_state(*sites),
            ModelSpec::Xxz(p) => neel_state(p.sites),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Entropy,
    Imbalance,
    Dephasing,
    SuccessProb,
}

impl Observable {
    pub const ALL: [Observable; 4] = [Observable::Entropy, Observable::Imbalance, Observable::Dephasing, Observable::SuccessProb];

    fn quantities(self) -> &'static [Quantity] {
        match self {
            Observable::Entropy => &[Quantity::EntropyVn],
            Observable::Imbalance => &[Quantity::ImbalanceRaw, Quantity::ImbalanceNorm],
            Observable::Dephasing => &[Quantity::DephasingAbs, Quantity::DephasingRe],
            Observable::SuccessProb => &[Quantity::SuccessProb],
        }
    }
}

/// Scalar recorded per realization and time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quantity {
    EntropyVn,
    ImbalanceRaw,
    ImbalanceNorm,
    DephasingAbs,
    DephasingRe,
    SuccessProb,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::EntropyVn => "S_vN",
            Quantity::ImbalanceRaw => "I_raw",
            Quantity::ImbalanceNorm => "I_norm",
            Quantity::DephasingAbs => "phi_abs",
            Quantity::DephasingRe => "phi_re",
            Quantity::SuccessProb => "success_prob",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub model: ModelSpec,
    pub n_profiles: usize,
    pub n_realizations: usize,
    pub times: Vec<f64>,
    pub master_seed: u64,
    pub observables: Vec<Observable>,
    /// Evolve XXZ profiles inside the initial state's magnetization sector.
    pub sector_reduction: bool,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let sites = self.model.sites();
        if sites > MAX_ENSEMBLE_SITES {
            return Err(Error::InvalidParameter(format!(
                "{sites} sites exceeds the ensemble ceiling of {MAX_ENSEMBLE_SITES}"
            )));
        }
        match &self.model {
            ModelSpec::Liom { sites, coupling_scale, xi } => {
                LiomCouplings::from_fn(*sites, *coupling_scale, *xi, |_, _| 0.0)?;
            }
            ModelSpec::Xxz(p) => p.validate()?,
        }
        if self.n_profiles == 0 {
            return Err(Error::InvalidParameter("number of superposed profiles must be at least 1".into()));
        }
        if self.n_realizations == 0 {
            return Err(Error::InvalidParameter("number of realizations must be at least 1".into()));
        }
        if self.n_profiles.saturating_mul(self.n_realizations) > MAX_PROFILE_DRAWS {
            return Err(Error::InvalidParameter(format!(
                "N x realizations = {} exceeds {MAX_PROFILE_DRAWS}",
                self.n_profiles.saturating_mul(self.n_realizations)
            )));
        }
        if self.times.is_empty() || self.times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
            return Err(Error::InvalidParameter("time grid must be nonempty, finite and nonnegative".into()));
        }
        if self.times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter("time grid must be strictly increasing".into()));
        }
        Ok(())
    }

    fn quantities(&self) -> Vec<Quantity> {
        let mut obs = self.observables.clone();
        obs.sort();
        obs.dedup();
        obs.iter().flat_map(|o| o.quantities().iter().copied()).collect()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed of realization `r`.
pub fn realization_seed(master_seed: u64, n_profiles: usize, r: usize) -> u64 {
    let base = splitmix64(master_seed ^ splitmix64((n_profiles as u64).wrapping_mul(GOLDEN_GAMMA)));
    splitmix64(base.wrapping_add((r as u64).wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// The superposition drawn for realization `r`.
pub fn draw_superposition(spec: &ExperimentSpec, r: usize, sector: Option<&Arc<SzSector>>) -> Result<SuperpositionSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(realization_seed(spec.master_seed, spec.n_profiles, r));
    match &spec.model {
        ModelSpec::Liom { sites, coupling_scale, xi } => {
            let couplings = (0..spec.n_profiles)
                .map(|_| LiomCouplings::sample(*sites, *coupling_scale, *xi, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            SuperpositionSpec::liom(&couplings)
        }
        ModelSpec::Xxz(p) => {
            let fields = (0..spec.n_profiles)
                .map(|_| sample_fields(p.sites, p.disorder, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            match sector {
                Some(s) => SuperpositionSpec::xxz_in_sector(p, &fields, s.clone()),
                None => SuperpositionSpec::xxz(p, &fields),
            }
        }
    }
}

/// Per-time samples of one realization; `None` marks degenerate postselection.
type Trace = Vec<Option<Vec<f64>>>;

fn run_realization(
    spec: &ExperimentSpec,
    quantities: &[Quantity],
    psi0: &StateVector,
    sector: Option<&Arc<SzSector>>,
    r: usize,
) -> Result<Trace> {
    let sup = draw_superposition(spec, r, sector)?;
    let prepared = sup.prepare(psi0)?;
    spec.times
        .iter()
        .map(|&t| {
            let cond = match prepared.at(t) {
                Ok(c) => c,
                Err(Error::DegeneratePostselection(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let needs_imbalance = quantities.iter().any(|q| matches!(q, Quantity::ImbalanceRaw | Quantity::ImbalanceNorm));
            let needs_phi = quantities.iter().any(|q| matches!(q, Quantity::DephasingAbs | Quantity::DephasingRe));
            let imb = needs_imbalance.then(|| imbalance(&cond.state));
            let phi = if needs_phi { Some(effective_dephasing_factor(&cond, 1)?) } else { None };
            let row = quantities
                .iter()
                .map(|q| {
                    Ok(match q {
                        Quantity::EntropyVn => half_chain_entropy(&cond.state)?,
                        Quantity::ImbalanceRaw => imb.expect("computed").raw,
                        Quantity::ImbalanceNorm => imb.expect("computed").normalized,
                        Quantity::DephasingAbs => phi.expect("computed").norm(),
                        Quantity::DephasingRe => phi.expect("computed").re,
                        Quantity::SuccessProb => cond.success_prob,
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(Some(row))
        })
        .collect()
}

/// Mean and standard error of one quantity over the time grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantityStats {
    pub quantity: Quantity,
    pub mean: TimeSeries,
    pub sem: TimeSeries,
    /// Non-degenerate samples contributing at each time.
    pub counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub spec: ExperimentSpec,
    pub master_seed: u64,
    pub wall_time_s: f64,
    pub realizations_completed: usize,
    pub degenerate_realizations: usize,
    pub degenerate_samples: usize,
    /// How realization counts relate across different `N`.
    pub ensemble_reading: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub times: Vec<f64>,
    pub stats: Vec<QuantityStats>,
    /// Mean postselection probability over every recorded sample.
    pub success_prob_mean: f64,
    /// Smallest postselection probability seen.
    pub success_prob_min: f64,
    pub metadata: RunMetadata,
}

impl EnsembleResult {
    pub fn get(&self, q: Quantity) -> Option<&QuantityStats> {
        self.stats.iter().find(|s| s.quantity == q)
    }

    pub fn mean(&self, q: Quantity) -> Option<&[f64]> {
        self.get(q).map(|s| s.mean.values())
    }

    pub fn sem(&self, q: Quantity) -> Option<&[f64]> {
        self.get(q).map(|s| s.sem.values())
    }
}

pub fn run_ensemble(spec: &ExperimentSpec) -> Result<EnsembleResult> {
    run_ensemble_with_threads(spec, None)
}

/// Runs on a dedicated pool of `threads` workers, or the global pool.
pub fn run_ensemble_with_threads(spec: &ExperimentSpec, threads: Option<usize>) -> Result<EnsembleResult> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| run_inner(spec))
        }
        None => run_inner(spec),
    }
}

fn run_inner(spec: &ExperimentSpec) -> Result<EnsembleResult> {
    spec.validate()?;
    let start = Instant::now();
    let psi0 = spec.model.initial_state()?;
    let sector = match (&spec.model, spec.sector_reduction) {
        (ModelSpec::Xxz(p), true) => Some(Arc::new(SzSector::new(p.sites, neel_magnetization(p.sites))?)),
        _ => None,
    };

    // success probability is always tracked for the summary statistics
    let mut quantities = spec.quantities();
    let success_col = match quantities.iter().position(|&q| q == Quantity::SuccessProb) {
        Some(k) => k,
        None => {
            quantities.push(Quantity::SuccessProb);
            quantities.len() - 1
        }
    };

    let traces: Vec<Trace> = (0..spec.n_realizations)
        .into_par_iter()
        .map(|r| run_realization(spec, &quantities, &psi0, sector.as_ref(), r))
        .collect::<Result<Vec<_>>>()?;

    let degenerate_realizations = traces.iter().filter(|tr| tr.iter().any(Option::is_none)).count();
    let degenerate_samples: usize = traces.iter().map(|tr| tr.iter().filter(|x| x.is_none()).count()).sum();
    if degenerate_realizations * 100 > spec.n_realizations {
        return Err(Error::TooManyDegenerate { degenerate: degenerate_realizations, total: spec.n_realizations });
    }

    let nt = spec.times.len();
    let mut stats = Vec::new();
    for (col, &q) in quantities.iter().enumerate() {
        if q == Quantity::SuccessProb && !spec.observables.contains(&Observable::SuccessProb) {
            continue;
        }
        let mut means = Vec::with_capacity(nt);
        let mut sems = Vec::with_capacity(nt);
        let mut counts = Vec::with_capacity(nt);
        for k in 0..nt {
            let samples: Vec<f64> = traces.iter().filter_map(|tr| tr[k].as_ref().map(|row| row[col])).collect();
            let (m, s) = mean_and_sem(&samples);
            means.push(m);
            sems.push(s);
            counts.push(samples.len());
        }
        stats.push(QuantityStats {
            quantity: q,
            mean: TimeSeries::new(format!("{}_mean", q.name()), spec.times.clone(), means)?,
            sem: TimeSeries::new(format!("{}_sem", q.name()), spec.times.clone(), sems)?,
            counts,
        });
    }

    let all_success: Vec<f64> = traces
        .iter()
        .flat_map(|tr| tr.iter().flatten().map(|row| row[success_col]))
        .collect();
    let success_prob_mean = pairwise_sum(&all_success) / all_success.len().max(1) as f64;
    let success_prob_min = all_success.iter().copied().fold(f64::INFINITY, f64::min);

    Ok(EnsembleResult {
        times: spec.times.clone(),
        stats,
        success_prob_mean,
        success_prob_min,
        metadata: RunMetadata {
            spec: spec.clone(),
            master_seed: spec.master_seed,
            wall_time_s: start.elapsed().as_secs_f64(),
            realizations_completed: spec.n_realizations - degenerate_realizations,
            degenerate_realizations,
            degenerate_samples,
            ensemble_reading: format!(
                "{} independent superposition sets of N = {} profiles each",
                spec.n_realizations, spec.n_profiles
            ),
        },
    })
}

/// Total `S_z` of the Néel state: 0 for even `L`, 1/2 for odd `L`.
fn neel_magnetization(sites: usize) -> f64 {
    if sites.is_multiple_of(2) {
        0.0
    } else {
        0.5
    }
}

fn mean_and_sem(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Fixed-shape pairwise reduction with compensated leaves.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for &x in xs {
            let t = sum + x;
            if sum.abs() >= x.abs() {
                comp += (sum - t) + x;
            } else {
                comp += (x - t) + sum;
            }
            sum = t;
        }
        return sum + comp;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `points_per_decade`-spaced logarithmic grid from `t_min` to `t_max`
/// inclusive.
pub fn make_time_grid(t_min: f64, t_max: f64, points_per_decade: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0) || !(t_max > t_min) || !t_max.is_finite() {
        return Err(Error::InvalidParameter(format!("invalid time bounds [{t_min}, {t_max}]")));
    }
    if points_per_decade == 0 {
        return Err(Error::InvalidParameter("points per decade must be positive".into()));
    }
    let (lo, hi) = (t_min.log10(), t_max.log10());
    let steps = (((hi - lo) * points_per_decade as f64).round() as usize).max(1);
    let mut grid: Vec<f64> = (0..=steps)
        .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / steps as f64))
        .collect();
    grid[0] = t_min;
    grid[steps] = t_max;
    Ok(grid)
}

/// Logarithmic grid plus `window_points` linearly spaced samples covering
/// the saturation window.
pub fn make_time_grid_with_window(
    t_min: f64,
    t_max: f64,
    points_per_decade: usize,
    window: Option<(f64, f64)>,
    window_points: usize,
) -> Result<Vec<f64>> {
    let mut grid = make_time_grid(t_min, t_max, points_per_decade)?;
    if let Some((ti, tf)) = window {
        if !(ti >= t_min && tf <= t_max && ti < tf) {
            return Err(Error::InvalidWindow(format!(
                "[{ti:e}, {tf:e}] must lie inside [{t_min:e}, {t_max:e}]"
            )));
        }
        if window_points < 2 {
            return Err(Error::InvalidWindow("window needs at least 2 points".into()));
        }
        grid.extend((0..window_points).map(|k| ti + (tf - ti) * k as f64 / (window_points - 1) as f64));
        grid.sort_by(f64::total_cmp);
        grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    }
    Ok(grid)
}
