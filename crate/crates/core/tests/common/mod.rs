//! Property checks shared by the property suite and the acceptance run.
//! Each returns the largest deviation seen.
#![allow(dead_code)]

use mbl_superpose::hilbert::{embed_site_operator, expectation_sigma_z, hermiticity_defect, partial_trace, pauli_z, von_neumann_entropy};
use mbl_superpose::liom::{analytic_dephasing, plus_product_state, LiomCouplings};
use mbl_superpose::observables::{half_chain_entropy, linear_entropy};
use mbl_superpose::propagator::eigendecompose;
use mbl_superpose::superpose::{conditional_state, effective_dephasing_factor, SuperpositionSpec};
use mbl_superpose::xxz::{build_xxz_hamiltonian, neel_state, sample_fields, XxzParams};
use mbl_superpose::{StateVector, C64};
use rand::Rng;

pub fn random_state(sites: usize, rng: &mut impl Rng) -> StateVector {
    StateVector::random(sites, rng).unwrap()
}

/// `|tr ρ_keep − 1|`.
pub fn trace_defect(psi: &StateVector, keep: &[usize]) -> f64 {
    let rho = partial_trace(psi, keep).unwrap();
    let tr: C64 = rho.matrix().diagonal().iter().sum();
    (tr - C64::new(1.0, 0.0)).norm()
}

/// Moves old site `i` to new site `perm[i - 1]`.
pub fn relabel(psi: &StateVector, perm: &[usize]) -> StateVector {
    let l = psi.sites();
    let mut out = vec![C64::new(0.0, 0.0); psi.dim()];
    for (b, &a) in psi.amplitudes().iter().enumerate() {
        let mut nb = 0usize;
        for i in 1..=l {
            let bit = (b >> (l - i)) & 1;
            nb |= bit << (l - perm[i - 1]);
        }
        out[nb] = a;
    }
    StateVector::new(l, out).unwrap()
}

pub fn entropy_of(psi: &StateVector, keep: &[usize]) -> f64 {
    von_neumann_entropy(&partial_trace(psi, keep).unwrap()).unwrap()
}

/// Entropy of `keep` against the entropy of its image under `perm`.
pub fn relabel_defect(psi: &StateVector, keep: &[usize], perm: &[usize]) -> f64 {
    let moved = relabel(psi, perm);
    let mut image: Vec<usize> = keep.iter().map(|&s| perm[s - 1]).collect();
    image.sort_unstable();
    (entropy_of(psi, keep) - entropy_of(&moved, &image)).abs()
}

/// Bit-masked `⟨σ_z⟩` against the embedded dense operator.
pub fn sigma_z_defect(psi: &StateVector, site: usize) -> f64 {
    let dense = embed_site_operator(&pauli_z(), site, psi.sites()).unwrap();
    let direct = expectation_sigma_z(psi, site).unwrap();
    (dense.expectation(psi).unwrap() - C64::new(direct, 0.0)).norm()
}

/// Half-chain entropy against the entropy of the complementary half.
pub fn schmidt_defect(psi: &StateVector) -> f64 {
    let l = psi.sites();
    let cut = l / 2;
    let right: Vec<usize> = (cut + 1..=l).collect();
    (half_chain_entropy(psi).unwrap() - entropy_of(psi, &right)).abs()
}

/// Amount by which the half-chain entropy leaves `[0, L/2]`.
pub fn entropy_bound_violation(psi: &StateVector) -> f64 {
    let s = half_chain_entropy(psi).unwrap();
    let top = psi.sites() as f64 / 2.0;
    (-s).max(s - top).max(0.0)
}

pub fn random_xxz(sites: usize, rng: &mut impl Rng) -> XxzParams {
    XxzParams::new(sites, rng.gen_range(0.5..1.5), rng.gen_range(-1.0..1.0), rng.gen_range(0.0..5.0)).unwrap()
}

/// Hermiticity defect and largest `|[H, S_z^tot]|` element.
pub fn hamiltonian_defects(sites: usize, rng: &mut impl Rng) -> (f64, f64) {
    let p = random_xxz(sites, rng);
    let h = build_xxz_hamiltonian(&p, &sample_fields(sites, p.disorder, rng).unwrap()).unwrap();
    let m = h.matrix();
    let sz = |b: usize| -> f64 { (0..sites).map(|k| if (b >> k) & 1 == 0 { 0.5 } else { -0.5 }).sum() };
    let mut comm: f64 = 0.0;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            comm = comm.max((m[(r, c)] * (sz(c) - sz(r))).norm());
        }
    }
    (hermiticity_defect(m), comm)
}

/// Norm drift of plain and postselected evolution at time `t`.
pub fn norm_drift(sites: usize, n: usize, t: f64, rng: &mut impl Rng) -> f64 {
    let p = random_xxz(sites, rng);
    let fields: Vec<_> = (0..n).map(|_| sample_fields(sites, p.disorder, rng).unwrap()).collect();
    let psi0 = neel_state(sites).unwrap();
    let h = build_xxz_hamiltonian(&p, &fields[0]).unwrap();
    let plain = eigendecompose(&h).unwrap().evolve(&psi0, t).unwrap();
    let spec = SuperpositionSpec::xxz(&p, &fields).unwrap();
    let cond = conditional_state(&spec, &psi0, t).unwrap();
    (plain.norm_sqr() - 1.0).abs().max((cond.state.norm_sqr() - 1.0).abs())
}

/// Success probability at `t` (must lie in `(0, 1]`) and its distance
/// from 1 at `t = 0`.
pub fn success_probabilities(sites: usize, n: usize, t: f64, rng: &mut impl Rng) -> (f64, f64) {
    let couplings: Vec<_> = (0..n).map(|_| LiomCouplings::sample(sites, 1.0, 0.5, rng).unwrap()).collect();
    let spec = SuperpositionSpec::liom(&couplings).unwrap();
    let psi0 = plus_product_state(sites).unwrap();
    let p = conditional_state(&spec, &psi0, t).unwrap().success_prob;
    let p0 = conditional_state(&spec, &psi0, 0.0).unwrap().success_prob;
    (p, (p0 - 1.0).abs())
}

/// Linear entropy from the analytic dephasing factor against
/// `1 − tr ρ₁²` of the evolved state.
pub fn linear_entropy_defect(c: &LiomCouplings, t: f64) -> f64 {
    let spec = SuperpositionSpec::liom(std::slice::from_ref(c)).unwrap();
    let psi0 = plus_product_state(c.sites()).unwrap();
    let cond = conditional_state(&spec, &psi0, t).unwrap();
    let purity = partial_trace(&cond.state, &[1]).unwrap().purity();
    (linear_entropy(analytic_dephasing(c, t)) - (1.0 - purity)).abs()
}

/// Change of the site-1 dephasing factor when couplings not touching
/// site 1 are redrawn.
pub fn spectator_coupling_defect(c: &LiomCouplings, t: f64, rng: &mut impl Rng) -> f64 {
    let mut other = c.clone();
    for i in 2..=c.sites() {
        for j in i + 1..=c.sites() {
            let b = c.bound(i, j);
            other.set(i, j, rng.gen_range(-b..=b));
        }
    }
    let psi0 = plus_product_state(c.sites()).unwrap();
    let phi = |c: &LiomCouplings| {
        let spec = SuperpositionSpec::liom(std::slice::from_ref(c)).unwrap();
        effective_dephasing_factor(&conditional_state(&spec, &psi0, t).unwrap(), 1).unwrap()
    };
    (phi(c) - phi(&other)).norm()
}
