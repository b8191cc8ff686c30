//! Superposed disorder with ancilla postselection.
//!
//! An ancilla prepared in `Σ_p |p⟩/√N` selects one of `N` disorder
//! profiles. After joint evolution under `Σ_p |p⟩⟨p| ⊗ H_p` the ancilla is
//! projected back onto its initial state, leaving the system in
//! `ψ̃ = (1/N) Σ_p e^{−iH_p t} ψ₀`, renormalized. The success probability of
//! the projection is `‖ψ̃‖²`.
//!
//! Two independent routes compute the conditional state:
//! [`conditional_state`] sums the branch evolutions directly, and
//! [`ancilla_extended_evolution`] builds the joint block Hamiltonian and
//! performs the projection explicitly.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hilbert::{partial_trace, StateVector, C64, ZERO};
use crate::liom::{DiagonalHamiltonian, LiomCouplings};
use crate::propagator::{eigendecompose, DenseHamiltonian, Propagator};
use crate::xxz::{build_xxz_hamiltonian, build_xxz_sector_hamiltonian, FieldProfile, SzSector, XxzParams};

/// Postselection with `‖ψ̃‖²` below this is reported as degenerate.
pub const DEGENERATE_THRESHOLD: f64 = 1e-12;

/// Default largest joint (ancilla ⊗ system) dimension the oracle accepts.
pub const ORACLE_CEILING: usize = 1 << 12;

/// Time-evolution generator of one disorder profile.
#[derive(Clone, Debug)]
pub enum Branch {
    /// Diagonal in the product basis; evolution is a phase per state.
    Diagonal(DiagonalHamiltonian),
    /// Dense Hamiltonian with its cached eigendecomposition.
    Dense {
        hamiltonian: DenseHamiltonian,
        propagator: Propagator,
    },
}

impl Branch {
    pub fn dense(hamiltonian: DenseHamiltonian) -> Result<Self> {
        let propagator = eigendecompose(&hamiltonian)?;
        Ok(Branch::Dense { hamiltonian, propagator })
    }

    fn dim(&self) -> usize {
        match self {
            Branch::Diagonal(h) => h.dim(),
            Branch::Dense { hamiltonian, .. } => hamiltonian.dim(),
        }
    }

    /// Hamiltonian as a dense matrix in the working basis.
    pub fn hamiltonian(&self) -> DenseHamiltonian {
        match self {
            Branch::Diagonal(h) => DenseHamiltonian::from_diagonal(h.energies()),
            Branch::Dense { hamiltonian, .. } => hamiltonian.clone(),
        }
    }
}

/// `N` profiles of one model over a common working basis.
///
/// The working basis is either the full product basis or, when `sector` is
/// set, the basis states of one magnetization sector.
#[derive(Clone, Debug)]
pub struct SuperpositionSpec {
    sites: usize,
    branches: Vec<Branch>,
    sector: Option<Arc<SzSector>>,
}

impl SuperpositionSpec {
    pub fn new(sites: usize, branches: Vec<Branch>, sector: Option<Arc<SzSector>>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidParameter("at least one profile is required".into()));
        }
        let dim = sector.as_ref().map_or(1usize << sites, |s| s.dim());
        if let Some(s) = &sector {
            if s.sites() != sites {
                return Err(Error::DimensionMismatch { expected: sites, found: s.sites() });
            }
        }
        let diagonal = matches!(branches[0], Branch::Diagonal(_));
        for b in &branches {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: b.dim() });
            }
            if matches!(b, Branch::Diagonal(_)) != diagonal {
                return Err(Error::InvalidParameter("profiles must share one model kind".into()));
            }
        }
        Ok(Self { sites, branches, sector })
    }

    pub fn liom(couplings: &[LiomCouplings]) -> Result<Self> {
        let sites = couplings.first().map_or(0, |c| c.sites());
        if couplings.iter().any(|c| c.sites() != sites || c.scale() != couplings[0].scale() || c.xi() != couplings[0].xi()) {
            return Err(Error::InvalidParameter("profiles must share L, scale and localization length".into()));
        }
        let branches = couplings
            .iter()
            .map(|c| Branch::Diagonal(DiagonalHamiltonian::from_couplings(c)))
            .collect();
        Self::new(sites, branches, None)
    }

    /// XXZ profiles in the full product basis.
    pub fn xxz(params: &XxzParams, fields: &[FieldProfile]) -> Result<Self> {
        let branches = fields
            .iter()
            .map(|f| Branch::dense(build_xxz_hamiltonian(params, f)?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params.sites, branches, None)
    }

    /// XXZ profiles restricted to one magnetization sector.
    pub fn xxz_in_sector(params: &XxzParams, fields: &[FieldProfile], sector: Arc<SzSector>) -> Result<Self> {
        let branches = fields
            .iter()
            .map(|f| Branch::dense(build_xxz_sector_hamiltonian(params, f, &sector)?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params.sites, branches, Some(sector))
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn n_profiles(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn sector(&self) -> Option<&Arc<SzSector>> {
        self.sector.as_ref()
    }

    pub fn working_dim(&self) -> usize {
        self.branches[0].dim()
    }

    fn to_working(&self, psi: &StateVector) -> Result<Vec<C64>> {
        if psi.sites() != self.sites {
            return Err(Error::DimensionMismatch { expected: self.sites, found: psi.sites() });
        }
        match &self.sector {
            Some(s) => s.restrict(psi),
            None => Ok(psi.amplitudes().to_vec()),
        }
    }

    fn to_full(&self, amps: Vec<C64>) -> Vec<C64> {
        match &self.sector {
            Some(s) => s.embed(&amps),
            None => amps,
        }
    }

    /// Caches the branch-wise projections of `psi0` for repeated evaluation.
    pub fn prepare(&self, psi0: &StateVector) -> Result<PreparedSuperposition<'_>> {
        let work = self.to_working(psi0)?;
        let coeffs = self
            .branches
            .iter()
            .map(|b| match b {
                Branch::Diagonal(_) => work.clone(),
                Branch::Dense { propagator, .. } => propagator.project(&work),
            })
            .collect();
        Ok(PreparedSuperposition { spec: self, coeffs })
    }
}

/// Normalized postselected state and the probability of postselection.
#[derive(Clone, Debug)]
pub struct ConditionalResult {
    pub state: StateVector,
    pub success_prob: f64,
}

/// A [`SuperpositionSpec`] bound to an initial state.
pub struct PreparedSuperposition<'a> {
    spec: &'a SuperpositionSpec,
    coeffs: Vec<Vec<C64>>,
}

impl PreparedSuperposition<'_> {
    /// Unnormalized `ψ̃(t)` in the full product basis.
    pub fn unnormalized(&self, t: f64) -> Vec<C64> {
        let n = self.spec.branches.len();
        let w = 1.0 / n as f64;
        let mut acc = vec![ZERO; self.spec.working_dim()];
        for (branch, c) in self.spec.branches.iter().zip(&self.coeffs) {
            match branch {
                Branch::Diagonal(h) => {
                    for ((o, a), &e) in acc.iter_mut().zip(c).zip(h.energies()) {
                        *o += a * C64::from_polar(w, -e * t);
                    }
                }
                Branch::Dense { propagator, .. } => propagator.accumulate(c, t, w, &mut acc),
            }
        }
        self.spec.to_full(acc)
    }

    pub fn at(&self, t: f64) -> Result<ConditionalResult> {
        finish(self.spec.sites, self.unnormalized(t))
    }
}

fn finish(sites: usize, amps: Vec<C64>) -> Result<ConditionalResult> {
    let p: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if !(p >= DEGENERATE_THRESHOLD) {
        return Err(Error::DegeneratePostselection(p));
    }
    let (state, success_prob) = StateVector::from_unnormalized(sites, amps)?;
    Ok(ConditionalResult { state, success_prob })
}

/// `ψ̃ = (1/N) Σ_p U_p(t) ψ₀`, normalized, with `‖ψ̃‖²`.
pub fn conditional_state(spec: &SuperpositionSpec, psi0: &StateVector, t: f64) -> Result<ConditionalResult> {
    spec.prepare(psi0)?.at(t)
}

/// Joint ancilla–system evolution followed by explicit projection of the
/// ancilla onto `Σ_p |p⟩/√N`.
///
/// Uses only the eigensolver in common with the direct route.
pub struct AncillaOracle {
    sites: usize,
    n: usize,
    dim: usize,
    sector: Option<Arc<SzSector>>,
    energies: Vec<f64>,
    vectors: nalgebra::DMatrix<C64>,
    // joint initial state in the joint eigenbasis
    coeffs: Vec<C64>,
}

impl AncillaOracle {
    pub fn new(spec: &SuperpositionSpec, psi0: &StateVector) -> Result<Self> {
        Self::with_ceiling(spec, psi0, ORACLE_CEILING)
    }

    pub fn with_ceiling(spec: &SuperpositionSpec, psi0: &StateVector, ceiling: usize) -> Result<Self> {
        let n = spec.n_profiles();
        let dim = spec.working_dim();
        if n * dim > ceiling {
            return Err(Error::OracleCeiling { dim: n * dim, ceiling });
        }
        let blocks: Vec<DenseHamiltonian> = spec.branches.iter().map(Branch::hamiltonian).collect();
        let block_refs: Vec<&DenseHamiltonian> = blocks.iter().collect();
        let joint = DenseHamiltonian::direct_sum(&block_refs);
        let prop = eigendecompose(&joint)?;

        // |ψ_a⟩ ⊗ |ψ₀⟩ with ancilla index outermost
        let work = spec.to_working(psi0)?;
        let amp = 1.0 / (n as f64).sqrt();
        let joint_state: Vec<C64> = (0..n).flat_map(|_| work.iter().map(move |a| a * amp)).collect();
        let v = prop.vectors().clone();
        let coeffs = (0..n * dim)
            .map(|k| v.column(k).iter().zip(&joint_state).map(|(x, a)| x.conj() * a).sum())
            .collect();
        Ok(Self {
            sites: spec.sites,
            n,
            dim,
            sector: spec.sector.clone(),
            energies: prop.energies().to_vec(),
            vectors: v,
            coeffs,
        })
    }

    pub fn at(&self, t: f64) -> Result<ConditionalResult> {
        let total = self.n * self.dim;
        let phased: Vec<C64> = self
            .coeffs
            .iter()
            .zip(&self.energies)
            .map(|(c, &e)| c * C64::from_polar(1.0, -e * t))
            .collect();
        let evolved = &self.vectors * nalgebra::DVector::from_vec(phased);
        debug_assert_eq!(evolved.len(), total);

        // ⟨ψ_a| ⊗ 1 applied to the joint state
        let amp = 1.0 / (self.n as f64).sqrt();
        let mut projected = vec![ZERO; self.dim];
        for p in 0..self.n {
            for (b, slot) in projected.iter_mut().enumerate() {
                *slot += evolved[p * self.dim + b] * amp;
            }
        }
        let full = match &self.sector {
            Some(s) => s.embed(&projected),
            None => projected,
        };
        finish(self.sites, full)
    }
}

pub fn ancilla_extended_evolution(spec: &SuperpositionSpec, psi0: &StateVector, t: f64) -> Result<ConditionalResult> {
    AncillaOracle::new(spec, psi0)?.at(t)
}

/// `2 ρ_site(↑, ↓)` of the conditional state; equals 1 at `t = 0` for the
/// all-plus product state.
pub fn effective_dephasing_factor(cond: &ConditionalResult, site: usize) -> Result<C64> {
    let rho = partial_trace(&cond.state, &[site])?;
    Ok(rho.matrix()[(0, 1)] * 2.0)
}
