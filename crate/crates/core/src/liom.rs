//! Deep-localized l-bit model with two-body couplings only.
//!
//! Couplings follow `J_ij = J̃_ij · exp(−|i−j|/ξ)` with `J̃_ij` i.i.d.
//! uniform on `[−𝒥, 𝒥]`. The Hamiltonian `Σ_{i<j} J_ij τ_i τ_j` is diagonal
//! in the product basis, so evolution is a phase per basis state.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hilbert::{check_sites, spin, StateVector, C64};

/// One draw of l-bit couplings for an `L`-site chain.
#[derive(Clone, Debug, PartialEq)]
pub struct LiomCouplings {
    sites: usize,
    scale: f64,
    xi: f64,
    // upper triangle, row-major over (i, j) with i < j
    values: Vec<f64>,
}

impl LiomCouplings {
    /// Draws couplings in lexicographic `(i, j)` order from `rng`.
    pub fn sample(sites: usize, scale: f64, xi: f64, rng: &mut impl Rng) -> Result<Self> {
        validate(sites, scale, xi)?;
        let mut values = Vec::with_capacity(sites * (sites - 1) / 2);
        for i in 1..=sites {
            for j in (i + 1)..=sites {
                let prefactor = scale * rng.gen_range(-1.0..1.0);
                values.push(prefactor * envelope(i, j, xi));
            }
        }
        Ok(Self { sites, scale, xi, values })
    }

    /// Couplings given explicitly; `f(i, j)` is called for every `i < j`.
    /// The decay bound is not enforced here.
    pub fn from_fn(sites: usize, scale: f64, xi: f64, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        validate(sites, scale, xi)?;
        let mut values = Vec::with_capacity(sites * (sites - 1) / 2);
        for i in 1..=sites {
            for j in (i + 1)..=sites {
                values.push(f(i, j));
            }
        }
        Ok(Self { sites, scale, xi, values })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// `J_ij` for 1-based sites, symmetric in its arguments, zero on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if i == j || i == 0 || j > self.sites {
            return 0.0;
        }
        self.values[self.offset(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        assert!(i >= 1 && i < j && j <= self.sites, "coupling ({i}, {j}) out of range");
        let k = self.offset(i, j);
        self.values[k] = value;
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        let l = self.sites;
        // rows 1..i-1 hold (l-1) + (l-2) + ... entries
        (i - 1) * (2 * l - i) / 2 + (j - i - 1)
    }

    /// Largest magnitude the sampling law allows for `J_ij`.
    pub fn bound(&self, i: usize, j: usize) -> f64 {
        self.scale * envelope(i, j, self.xi)
    }
}

fn envelope(i: usize, j: usize, xi: f64) -> f64 {
    (-(i.abs_diff(j) as f64) / xi).exp()
}

fn validate(sites: usize, scale: f64, xi: f64) -> Result<()> {
    check_sites(sites)?;
    if sites < 2 {
        return Err(Error::InvalidParameter(format!("l-bit chain needs at least 2 sites, got {sites}")));
    }
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::InvalidParameter(format!("localization length must be positive, got {xi}")));
    }
    if !(scale >= 0.0) || !scale.is_finite() {
        return Err(Error::InvalidParameter(format!("coupling scale must be nonnegative, got {scale}")));
    }
    Ok(())
}

/// Energies `E(b)` of a Hamiltonian diagonal in the product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalHamiltonian {
    sites: usize,
    energies: Vec<f64>,
}

impl DiagonalHamiltonian {
    pub fn new(sites: usize, energies: Vec<f64>) -> Result<Self> {
        check_sites(sites)?;
        if energies.len() != 1 << sites {
            return Err(Error::DimensionMismatch { expected: 1 << sites, found: energies.len() });
        }
        Ok(Self { sites, energies })
    }

    /// `E(b) = Σ_{i<j} J_ij s_i(b) s_j(b)`.
    pub fn from_couplings(c: &LiomCouplings) -> Self {
        let l = c.sites();
        let energies = (0..1usize << l)
            .map(|b| {
                let mut e = 0.0;
                for i in 1..=l {
                    let si = spin(b, i, l);
                    for j in (i + 1)..=l {
                        e += c.get(i, j) * si * spin(b, j, l);
                    }
                }
                e
            })
            .collect();
        Self { sites: l, energies }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }
}

pub fn build_diagonal_hamiltonian(c: &LiomCouplings) -> DiagonalHamiltonian {
    DiagonalHamiltonian::from_couplings(c)
}

/// `Π_{j>1} cos(2 J_1j t)`: coherence of the first l-bit under a single
/// profile, starting from the all-plus product state.
pub fn analytic_dephasing(c: &LiomCouplings, t: f64) -> C64 {
    let phi: f64 = (2..=c.sites()).map(|j| (2.0 * c.get(1, j) * t).cos()).product();
    C64::new(phi, 0.0)
}

/// `((|↑⟩ + |↓⟩)/√2)^{⊗L}`
pub fn plus_product_state(sites: usize) -> Result<StateVector> {
    check_sites(sites)?;
    let dim = 1usize << sites;
    let a = C64::new((dim as f64).sqrt().recip(), 0.0);
    StateVector::new(sites, vec![a; dim])
}

/// `amp_b ← amp_b · e^{−i E(b) t}`
pub fn evolve_diagonal(h: &DiagonalHamiltonian, psi: &StateVector, t: f64) -> Result<StateVector> {
    if psi.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: psi.dim() });
    }
    let amps = psi
        .amplitudes()
        .iter()
        .zip(h.energies())
        .map(|(a, &e)| a * C64::from_polar(1.0, -e * t))
        .collect();
    StateVector::unchecked(psi.sites(), amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{embed_site_operator, partial_trace, pauli_z};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_scale_gives_zero_couplings() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = LiomCouplings::sample(5, 0.0, 0.3, &mut rng).unwrap();
        for i in 1..=5 {
            for j in 1..=5 {
                assert_eq!(c.get(i, j), 0.0);
            }
        }
    }

    #[test]
    fn couplings_respect_decay_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let c = LiomCouplings::sample(6, 1.3, 0.7, &mut rng).unwrap();
            for i in 1..=6 {
                for j in (i + 1)..=6 {
                    assert!(c.get(i, j).abs() <= c.bound(i, j));
                }
            }
            assert!(c.get(1, 3).abs() <= 1.3 * (-2.0f64 / 0.7).exp());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(LiomCouplings::sample(4, 1.0, 0.0, &mut rng).is_err());
        assert!(LiomCouplings::sample(4, 1.0, -1.0, &mut rng).is_err());
        assert!(LiomCouplings::sample(1, 1.0, 0.3, &mut rng).is_err());
        assert!(LiomCouplings::sample(4, -1.0, 0.3, &mut rng).is_err());
    }

    #[test]
    fn same_seed_same_profile() {
        let a = LiomCouplings::sample(7, 1.0, 0.3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = LiomCouplings::sample(7, 1.0, 0.3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nearest_neighbour_prefactor_moments() {
        // J̃_12 = J_12 e^{1/ξ}; uniform on [−𝒥, 𝒥] has mean 0 and variance 𝒥²/3
        let scale = 2.0;
        let xi = 0.5;
        let n = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let draws: Vec<f64> = (0..n)
            .map(|_| LiomCouplings::sample(2, scale, xi, &mut rng).unwrap().get(1, 2) * (1.0 / xi).exp())
            .collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let target = scale * scale / 3.0;
        assert!(mean.abs() < 3.0 * (target / n as f64).sqrt());
        assert!((var / target - 1.0).abs() < 0.05);
    }

    #[test]
    fn two_site_energies() {
        let c = LiomCouplings::from_fn(2, 1.0, 1.0, |_, _| 0.37).unwrap();
        let h = DiagonalHamiltonian::from_couplings(&c);
        assert_eq!(h.energies(), &[0.37, -0.37, -0.37, 0.37]);
    }

    #[test]
    fn zero_couplings_zero_energies() {
        let c = LiomCouplings::from_fn(4, 1.0, 1.0, |_, _| 0.0).unwrap();
        assert!(DiagonalHamiltonian::from_couplings(&c).energies().iter().all(|&e| e == 0.0));
    }

    #[test]
    fn energies_match_dense_sigma_z_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = LiomCouplings::sample(4, 1.0, 0.8, &mut rng).unwrap();
        let h = DiagonalHamiltonian::from_couplings(&c);
        let mut dense = nalgebra::DMatrix::from_element(16, 16, C64::new(0.0, 0.0));
        for i in 1..=4 {
            let zi = embed_site_operator(&pauli_z(), i, 4).unwrap().matrix;
            for j in (i + 1)..=4 {
                let zj = embed_site_operator(&pauli_z(), j, 4).unwrap().matrix;
                dense += (&zi * &zj) * C64::new(c.get(i, j), 0.0);
            }
        }
        for b in 0..16 {
            assert!((dense[(b, b)].re - h.energies()[b]).abs() < 1e-14);
        }
    }

    #[test]
    fn spectrum_symmetric_under_global_flip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let c = LiomCouplings::sample(6, 1.0, 0.5, &mut rng).unwrap();
        let h = DiagonalHamiltonian::from_couplings(&c);
        let all = (1 << 6) - 1;
        for b in 0..64 {
            assert!((h.energies()[b] - h.energies()[all ^ b]).abs() < 1e-14);
        }
    }

    #[test]
    fn analytic_dephasing_simple_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = LiomCouplings::sample(5, 1.0, 0.3, &mut rng).unwrap();
        assert_eq!(analytic_dephasing(&c, 0.0), C64::new(1.0, 0.0));
        let c2 = LiomCouplings::sample(2, 1.0, 0.3, &mut rng).unwrap();
        let t = 4.2;
        assert!((analytic_dephasing(&c2, t).re - (2.0 * c2.get(1, 2) * t).cos()).abs() < 1e-15);
    }

    #[test]
    fn analytic_dephasing_matches_evolved_coherence() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let c = LiomCouplings::sample(5, 1.0, 0.3, &mut rng).unwrap();
        let t = 3.7 / c.scale();
        let h = DiagonalHamiltonian::from_couplings(&c);
        let psi = evolve_diagonal(&h, &plus_product_state(5).unwrap(), t).unwrap();
        let rho = partial_trace(&psi, &[1]).unwrap();
        let numeric = rho.matrix()[(0, 1)] * 2.0;
        let exact = analytic_dephasing(&c, t);
        assert!((numeric - exact).norm() < 1e-12);
    }

    #[test]
    fn plus_state_amplitudes() {
        let s1 = plus_product_state(1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(s1.amplitudes().iter().all(|a| (a.re - h).abs() < 1e-15 && a.im == 0.0));
        let s3 = plus_product_state(3).unwrap();
        assert!(s3.amplitudes().iter().all(|a| (a.re - 2f64.powf(-1.5)).abs() < 1e-15));
        assert!((plus_product_state(10).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolve_diagonal_identity_and_global_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let psi = StateVector::random(3, &mut rng).unwrap();
        let c = LiomCouplings::sample(3, 1.0, 0.5, &mut rng).unwrap();
        let h = DiagonalHamiltonian::from_couplings(&c);
        assert_eq!(evolve_diagonal(&h, &psi, 0.0).unwrap(), psi);

        let shift = DiagonalHamiltonian::new(3, vec![0.8; 8]).unwrap();
        let t = 2.5;
        let out = evolve_diagonal(&shift, &psi, t).unwrap();
        let want = psi.with_phase(-0.8 * t);
        for (a, b) in out.amplitudes().iter().zip(want.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn evolve_diagonal_preserves_moduli() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let psi = StateVector::random(5, &mut rng).unwrap();
        let c = LiomCouplings::sample(5, 1.0, 0.5, &mut rng).unwrap();
        let h = DiagonalHamiltonian::from_couplings(&c);
        let out = evolve_diagonal(&h, &psi, 1.0e7).unwrap();
        for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let h = DiagonalHamiltonian::new(3, vec![0.0; 8]).unwrap();
        let psi = plus_product_state(4).unwrap();
        assert!(matches!(evolve_diagonal(&h, &psi, 1.0), Err(Error::DimensionMismatch { .. })));
    }
}
