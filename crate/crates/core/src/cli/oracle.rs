//! Self-checks of the fast superposition path against independent routes.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hilbert::C64;
use crate::liom::{analytic_dephasing, evolve_diagonal, plus_product_state, DiagonalHamiltonian, LiomCouplings};
use crate::propagator::{eigendecompose, Propagator};
use crate::superpose::{
    conditional_state, effective_dephasing_factor, AncillaOracle, Branch, ConditionalResult, SuperpositionSpec,
};
use crate::xxz::{build_xxz_hamiltonian, neel_state, sample_fields, sz_sector_projector, XxzParams};

pub const ORACLE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.max_deviation < self.tolerance
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OracleOptions {
    pub seed: u64,
    /// Shifts the eigenvalues of one cached propagator so the fast path
    /// must disagree with the oracle.
    pub corrupt_propagator: bool,
}

/// 20 log-spaced times over `[1e-1, 1e3]`.
pub fn check_times() -> Vec<f64> {
    (0..20).map(|k| 10f64.powf(-1.0 + 4.0 * k as f64 / 19.0)).collect()
}

/// `|1 − |⟨a|b⟩||` and `|p_a − p_b|`, whichever is larger.
pub fn result_deviation(a: &ConditionalResult, b: &ConditionalResult) -> f64 {
    let overlap = (1.0 - a.state.inner(&b.state).norm()).abs();
    overlap.max((a.success_prob - b.success_prob).abs())
}

pub fn run_oracle_checks(opts: OracleOptions) -> Result<Vec<OracleReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let report = |name, max_deviation| OracleReport { name, max_deviation, tolerance: ORACLE_TOLERANCE };
    Ok(vec![
        report("fast_vs_ancilla", fast_vs_ancilla(&mut rng, opts.corrupt_propagator)?),
        report("single_profile_passthrough", single_profile(&mut rng)?),
        report("analytic_dephasing", analytic(&mut rng)?),
        report("interference_operators", interference(&mut rng)?),
        report("sector_vs_full", sector_vs_full(&mut rng)?),
        report("propagator_reconstruction", reconstruction(&mut rng)?),
    ])
}

fn xxz_params(sites: usize) -> XxzParams {
    XxzParams::new(sites, 1.0, 0.2, 3.0).expect("fixed parameters are valid")
}

fn corrupt(branch: &Branch) -> Branch {
    match branch {
        Branch::Dense { hamiltonian, propagator } => {
            let energies = propagator.energies().iter().enumerate().map(|(k, e)| e + 1e-3 * k as f64).collect();
            Branch::Dense {
                hamiltonian: hamiltonian.clone(),
                propagator: Propagator::from_parts(energies, propagator.vectors().clone()),
            }
        }
        Branch::Diagonal(h) => Branch::Diagonal(h.clone()),
    }
}

fn fast_vs_ancilla(rng: &mut ChaCha8Rng, corrupt_first: bool) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in [2, 3, 4] {
        let couplings: Vec<LiomCouplings> =
            (0..n).map(|_| LiomCouplings::sample(4, 1.0, 0.5, rng)).collect::<Result<_>>()?;
        let liom = SuperpositionSpec::liom(&couplings)?;

        let params = xxz_params(4);
        let fields = (0..n).map(|_| sample_fields(4, 3.0, rng)).collect::<Result<Vec<_>>>()?;
        let mut xxz = SuperpositionSpec::xxz(&params, &fields)?;
        if corrupt_first {
            let mut branches = xxz.branches().to_vec();
            branches[0] = corrupt(&branches[0]);
            xxz = SuperpositionSpec::new(4, branches, None)?;
        }

        for (spec, psi0) in [(&liom, plus_product_state(4)?), (&xxz, neel_state(4)?)] {
            let fast = spec.prepare(&psi0)?;
            let oracle = AncillaOracle::new(spec, &psi0)?;
            for t in check_times() {
                worst = worst.max(result_deviation(&fast.at(t)?, &oracle.at(t)?));
            }
        }
    }
    Ok(worst)
}

fn single_profile(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let c = LiomCouplings::sample(5, 1.0, 0.5, rng)?;
    let h = DiagonalHamiltonian::from_couplings(&c);
    let spec = SuperpositionSpec::liom(std::slice::from_ref(&c))?;
    let psi0 = plus_product_state(5)?;

    let params = xxz_params(5);
    let hx = build_xxz_hamiltonian(&params, &sample_fields(5, 3.0, rng)?)?;
    let prop = eigendecompose(&hx)?;
    let xspec = SuperpositionSpec::new(5, vec![Branch::dense(hx)?], None)?;
    let neel = neel_state(5)?;

    for t in check_times() {
        let direct = ConditionalResult { state: evolve_diagonal(&h, &psi0, t)?, success_prob: 1.0 };
        worst = worst.max(result_deviation(&conditional_state(&spec, &psi0, t)?, &direct));
        let direct = ConditionalResult { state: prop.evolve(&neel, t)?, success_prob: 1.0 };
        worst = worst.max(result_deviation(&conditional_state(&xspec, &neel, t)?, &direct));
    }
    Ok(worst)
}

fn analytic(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let psi0 = plus_product_state(6)?;
    for _ in 0..10 {
        let c = LiomCouplings::sample(6, 1.0, 0.5, rng)?;
        let spec = SuperpositionSpec::liom(std::slice::from_ref(&c))?;
        let prepared = spec.prepare(&psi0)?;
        for _ in 0..10 {
            let t = 10f64.powf(rng.gen_range(-1.0..3.0));
            let phi = effective_dephasing_factor(&prepared.at(t)?, 1)?;
            worst = worst.max((phi - analytic_dephasing(&c, t)).norm());
        }
    }
    Ok(worst)
}

/// `φ_eff = (1/(N² P)) Σ_{p,q} ⟨ψ₀'|F_{pq} G_{pq}|ψ₀'⟩`, both operators being
/// diagonal on sites `2..L`.
fn interference_sum(couplings: &[LiomCouplings], t: f64, success_prob: f64) -> C64 {
    let sites = couplings[0].sites();
    let rest = sites - 1;
    let spin = |b: usize, site: usize| if (b >> (sites - site)) & 1 == 0 { 1.0 } else { -1.0 };
    let mut total = C64::new(0.0, 0.0);
    for p in couplings {
        for q in couplings {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..1usize << rest {
                // b indexes sites 2..L with site 2 most significant
                let mut h_diff = 0.0;
                let mut g = 0.0;
                for i in 2..=sites {
                    g += (p.get(1, i) + q.get(1, i)) * spin(b, i);
                    for j in i + 1..=sites {
                        h_diff += (p.get(i, j) - q.get(i, j)) * spin(b, i) * spin(b, j);
                    }
                }
                acc += C64::from_polar(1.0, -(h_diff + g) * t);
            }
            total += acc / (1usize << rest) as f64;
        }
    }
    let n = couplings.len() as f64;
    total / (n * n * success_prob)
}

fn interference(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let psi0 = plus_product_state(4)?;
    for n in [1, 2, 3] {
        let couplings: Vec<LiomCouplings> =
            (0..n).map(|_| LiomCouplings::sample(4, 1.0, 0.8, rng)).collect::<Result<_>>()?;
        let spec = SuperpositionSpec::liom(&couplings)?;
        let prepared = spec.prepare(&psi0)?;
        for t in check_times() {
            let cond = prepared.at(t)?;
            let phi = effective_dephasing_factor(&cond, 1)?;
            worst = worst.max((phi - interference_sum(&couplings, t, cond.success_prob)).norm());
        }
    }
    Ok(worst)
}

fn sector_vs_full(rng: &mut ChaCha8Rng) -> Result<f64> {
    let params = xxz_params(6);
    let fields = (0..2).map(|_| sample_fields(6, 3.0, rng)).collect::<Result<Vec<_>>>()?;
    let sector = sz_sector_projector(6, 0.0)?;
    let reduced = SuperpositionSpec::xxz_in_sector(&params, &fields, Arc::clone(&sector))?;
    let full = SuperpositionSpec::xxz(&params, &fields)?;
    let psi0 = neel_state(6)?;
    let (a, b) = (reduced.prepare(&psi0)?, full.prepare(&psi0)?);
    let mut worst: f64 = 0.0;
    for t in check_times() {
        worst = worst.max(result_deviation(&a.at(t)?, &b.at(t)?));
    }
    Ok(worst)
}

fn reconstruction(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let params = xxz_params(6);
    for _ in 0..3 {
        let h = build_xxz_hamiltonian(&params, &sample_fields(6, 3.0, rng)?)?;
        let prop = eigendecompose(&h)?;
        worst = worst.max(prop.reconstruction_error(&h)).max(prop.unitarity_error());
    }
    Ok(worst)
}
