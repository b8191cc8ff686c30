//! Random-field XXZ chain, the Néel state and fixed-magnetization sectors.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{check_sites, site_shift, spin, StateVector, C64, ZERO};
use crate::propagator::DenseHamiltonian;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XxzParams {
    pub sites: usize,
    /// Flip-flop (hopping) energy.
    pub g: f64,
    /// Ising interaction energy.
    pub delta: f64,
    /// Fields are drawn from `[−W, W]`.
    pub disorder: f64,
    pub boundary: Boundary,
}

impl XxzParams {
    pub fn new(sites: usize, g: f64, delta: f64, disorder: f64) -> Result<Self> {
        let p = Self { sites, g, delta, disorder, boundary: Boundary::Open };
        p.validate()?;
        Ok(p)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Result<Self> {
        self.boundary = boundary;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_sites(self.sites)?;
        if self.sites < 2 {
            return Err(Error::InvalidParameter("XXZ chain needs at least 2 sites".into()));
        }
        if self.boundary == Boundary::Periodic && self.sites < 3 {
            return Err(Error::InvalidParameter("periodic chain needs at least 3 sites".into()));
        }
        if !(self.g >= 0.0) || !self.g.is_finite() {
            return Err(Error::InvalidParameter(format!("hopping must be nonnegative, got {}", self.g)));
        }
        if !(self.disorder >= 0.0) || !self.disorder.is_finite() {
            return Err(Error::InvalidParameter(format!("disorder must be nonnegative, got {}", self.disorder)));
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidParameter("interaction must be finite".into()));
        }
        Ok(())
    }

    fn bonds(&self) -> Vec<(usize, usize)> {
        let mut b: Vec<_> = (1..self.sites).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic {
            b.push((self.sites, 1));
        }
        b
    }
}

/// On-site fields `h_i`, one per site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldProfile {
    pub fields: Vec<f64>,
}

/// Draws `h_i` uniform on `[−W, W]` in site order.
pub fn sample_fields(sites: usize, disorder: f64, rng: &mut impl Rng) -> Result<FieldProfile> {
    check_sites(sites)?;
    if !(disorder >= 0.0) || !disorder.is_finite() {
        return Err(Error::InvalidParameter(format!("disorder must be nonnegative, got {disorder}")));
    }
    let fields = (0..sites).map(|_| disorder * rng.gen_range(-1.0..=1.0)).collect();
    Ok(FieldProfile { fields })
}

/// Full-space XXZ Hamiltonian with spin-1/2 operators `S = σ/2`.
pub fn build_xxz_hamiltonian(p: &XxzParams, f: &FieldProfile) -> Result<DenseHamiltonian> {
    let basis: Vec<usize> = (0..1usize << p.sites).collect();
    xxz_in_basis(p, f, &basis, Some)
}

/// XXZ Hamiltonian restricted to a magnetization sector.
pub fn build_xxz_sector_hamiltonian(p: &XxzParams, f: &FieldProfile, sector: &SzSector) -> Result<DenseHamiltonian> {
    if sector.sites() != p.sites {
        return Err(Error::DimensionMismatch { expected: p.sites, found: sector.sites() });
    }
    xxz_in_basis(p, f, sector.states(), |b| sector.position(b))
}

fn xxz_in_basis(
    p: &XxzParams,
    f: &FieldProfile,
    basis: &[usize],
    position: impl Fn(usize) -> Option<usize>,
) -> Result<DenseHamiltonian> {
    p.validate()?;
    if f.fields.len() != p.sites {
        return Err(Error::DimensionMismatch { expected: p.sites, found: f.fields.len() });
    }
    let l = p.sites;
    let bonds = p.bonds();
    let n = basis.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (col, &b) in basis.iter().enumerate() {
        let mut diag = 0.0;
        for (i, &h) in f.fields.iter().enumerate() {
            diag += 0.5 * h * spin(b, i + 1, l);
        }
        for &(i, j) in &bonds {
            let si = spin(b, i, l);
            let sj = spin(b, j, l);
            diag += 0.25 * p.delta * si * sj;
            // S+S- + S-S+ flips an antiparallel pair with amplitude g/2
            if si != sj && p.g != 0.0 {
                let flipped = b ^ (1 << site_shift(i, l)) ^ (1 << site_shift(j, l));
                if let Some(row) = position(flipped) {
                    m[(row, col)] += 0.5 * p.g;
                }
            }
        }
        m[(col, col)] += diag;
    }
    DenseHamiltonian::from_real(m)
}

/// `|↑↓↑↓…⟩`: σ_z = +1 on odd sites, −1 on even sites.
pub fn neel_state(sites: usize) -> Result<StateVector> {
    StateVector::basis(sites, neel_index(sites))
}

pub fn neel_index(sites: usize) -> usize {
    (1..=sites)
        .filter(|s| s % 2 == 0)
        .fold(0, |acc, s| acc | (1 << site_shift(s, sites)))
}

/// Basis states with fixed total `S_z`, in ascending index order.
#[derive(Clone, Debug, PartialEq)]
pub struct SzSector {
    sites: usize,
    total_sz: f64,
    states: Vec<usize>,
    // full-space index -> sector position (usize::MAX if outside)
    lookup: Vec<usize>,
}

impl SzSector {
    /// `total_sz` is in units of ħ, so `Σ_i s_i = 2 · total_sz`.
    pub fn new(sites: usize, total_sz: f64) -> Result<Self> {
        check_sites(sites)?;
        let twice = 2.0 * total_sz;
        let incompatible = Error::IncompatibleSector { sites, total_sz };
        if twice.fract() != 0.0 || twice.abs() > sites as f64 {
            return Err(incompatible);
        }
        let twice = twice as i64;
        if (sites as i64 - twice) % 2 != 0 {
            return Err(incompatible);
        }
        let downs = ((sites as i64 - twice) / 2) as u32;
        let dim = 1usize << sites;
        let states: Vec<usize> = (0..dim).filter(|b| b.count_ones() == downs).collect();
        let mut lookup = vec![usize::MAX; dim];
        for (k, &b) in states.iter().enumerate() {
            lookup[b] = k;
        }
        Ok(Self { sites, total_sz, states, lookup })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn total_sz(&self) -> f64 {
        self.total_sz
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn position(&self, b: usize) -> Option<usize> {
        match self.lookup.get(b) {
            Some(&k) if k != usize::MAX => Some(k),
            _ => None,
        }
    }

    /// Sector components of `psi`; fails if `psi` has weight elsewhere.
    pub fn restrict(&self, psi: &StateVector) -> Result<Vec<C64>> {
        if psi.sites() != self.sites {
            return Err(Error::DimensionMismatch { expected: self.sites, found: psi.sites() });
        }
        let inside: f64 = self.states.iter().map(|&b| psi.amplitudes()[b].norm_sqr()).sum();
        if (psi.norm_sqr() - inside).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "state has weight {:e} outside the S_z = {} sector",
                psi.norm_sqr() - inside,
                self.total_sz
            )));
        }
        Ok(self.states.iter().map(|&b| psi.amplitudes()[b]).collect())
    }

    /// Full-space amplitudes from sector components.
    pub fn embed(&self, amps: &[C64]) -> Vec<C64> {
        let mut full = vec![ZERO; 1 << self.sites];
        for (&b, &a) in self.states.iter().zip(amps) {
            full[b] = a;
        }
        full
    }
}

/// Ordered basis indices of the `total_sz` sector.
pub fn sz_sector_projector(sites: usize, total_sz: f64) -> Result<Arc<SzSector>> {
    SzSector::new(sites, total_sz).map(Arc::new)
}
