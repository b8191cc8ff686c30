//! Product-basis states and operators for chains of spin-1/2 sites.
//!
//! Basis convention used everywhere in this crate: a basis state is an
//! integer `b` in `0..2^L`. Site 1 is the most significant bit and site `L`
//! the least significant one. A cleared bit is spin up (σ_z = +1), a set bit
//! is spin down (σ_z = −1).

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest chain handled by the dense routines.
pub const MAX_SITES: usize = 14;

const NORM_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const OPERATOR_HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues below this are dropped from the entropy sum.
const ENTROPY_CLAMP: f64 = 1e-14;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

pub fn check_sites(sites: usize) -> Result<()> {
    if sites == 0 || sites > MAX_SITES {
        return Err(Error::InvalidLength(sites));
    }
    Ok(())
}

pub fn check_site(site: usize, sites: usize) -> Result<()> {
    if site == 0 || site > sites {
        return Err(Error::SiteOutOfRange { site, sites });
    }
    Ok(())
}

/// Bit position of a 1-based site inside a basis index.
#[inline]
pub fn site_shift(site: usize, sites: usize) -> usize {
    sites - site
}

/// σ_z eigenvalue (+1 or −1) of `site` in basis state `b`.
#[inline]
pub fn spin(b: usize, site: usize, sites: usize) -> f64 {
    if (b >> site_shift(site, sites)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn pauli_x() -> Matrix2<C64> {
    Matrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> Matrix2<C64> {
    Matrix2::new(ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO)
}

pub fn pauli_z() -> Matrix2<C64> {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

pub fn identity2() -> Matrix2<C64> {
    Matrix2::identity()
}

/// Normalized wavefunction of `L` spins over the product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    sites: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized.
    pub fn new(sites: usize, amps: Vec<C64>) -> Result<Self> {
        let state = Self::unchecked(sites, amps)?;
        let n = state.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(state)
    }

    /// Normalizes `amps`, returning the state and the original squared norm.
    pub fn from_unnormalized(sites: usize, mut amps: Vec<C64>) -> Result<(Self, f64)> {
        check_sites(sites)?;
        check_dim(sites, amps.len())?;
        let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        let inv = 1.0 / n.sqrt();
        amps.iter_mut().for_each(|a| *a *= inv);
        Ok((Self { sites, amps }, n))
    }

    pub fn basis(sites: usize, index: usize) -> Result<Self> {
        check_sites(sites)?;
        let dim = 1usize << sites;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { sites, amps })
    }

    pub(crate) fn unchecked(sites: usize, amps: Vec<C64>) -> Result<Self> {
        check_sites(sites)?;
        check_dim(sites, amps.len())?;
        Ok(Self { sites, amps })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Random normalized state: real and imaginary parts uniform on
    /// [−1, 1] before normalization. Not Haar distributed.
    pub fn random(sites: usize, rng: &mut impl Rng) -> Result<Self> {
        check_sites(sites)?;
        let amps = (0..1usize << sites)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Ok(Self::from_unnormalized(sites, amps)?.0)
    }

    /// Returns `e^{iθ}|ψ⟩`.
    pub fn with_phase(&self, theta: f64) -> StateVector {
        let p = C64::from_polar(1.0, theta);
        StateVector {
            sites: self.sites,
            amps: self.amps.iter().map(|a| a * p).collect(),
        }
    }
}

fn check_dim(sites: usize, len: usize) -> Result<()> {
    let dim = 1usize << sites;
    if len != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: len });
    }
    Ok(())
}

/// Dense square operator on the full chain.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    pub matrix: DMatrix<C64>,
    pub hermitian: bool,
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<C64>) -> Self {
        let hermitian = hermiticity_defect(&matrix) < OPERATOR_HERMITIAN_TOL;
        Self { matrix, hermitian }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// ⟨ψ|A|ψ⟩
    pub fn expectation(&self, state: &StateVector) -> Result<C64> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: state.dim() });
        }
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Ok(v.dotc(&(&self.matrix * &v)))
    }
}

/// max |A − A†| over all elements.
pub fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` acting on the 1-based `site`.
pub fn embed_site_operator(op: &Matrix2<C64>, site: usize, sites: usize) -> Result<DenseOperator> {
    check_sites(sites)?;
    check_site(site, sites)?;
    if op.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidParameter("operator has non-finite entries".into()));
    }
    let dim = 1usize << sites;
    let shift = site_shift(site, sites);
    let mask = 1usize << shift;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for row in 0..dim {
        let r = (row >> shift) & 1;
        let base = row & !mask;
        for c in 0..2 {
            m[(row, base | (c << shift))] = op[(r, c)];
        }
    }
    Ok(DenseOperator::new(m))
}

/// Single-site-or-more reduced state.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        check_density(&matrix)?;
        let min = SymmetricEigen::new(matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min < -HERMITIAN_TOL {
            return Err(Error::NegativeEigenvalue(min));
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

fn check_density(m: &DMatrix<C64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let defect = hermiticity_defect(m);
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
        return Err(Error::InvalidTrace(tr.re));
    }
    Ok(())
}

/// Reduced density matrix of the sites in `keep` (1-based, strictly
/// increasing). The kept sites keep their relative order, so the first kept
/// site is the most significant bit of the reduced index.
pub fn partial_trace(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let sites = state.sites();
    if keep.is_empty() {
        return Err(Error::InvalidKeepSet("empty".into()));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidKeepSet(format!("{keep:?} is not strictly increasing")));
    }
    for &s in keep {
        check_site(s, sites).map_err(|_| Error::InvalidKeepSet(format!("site {s} not in 1..={sites}")))?;
    }

    let traced: Vec<usize> = (1..=sites).filter(|s| !keep.contains(s)).collect();
    let dk = 1usize << keep.len();
    let dr = 1usize << traced.len();

    // amplitudes reshaped to (kept, traced) so that rho = M M^H
    let mut m = DMatrix::from_element(dk, dr, ZERO);
    for (b, &a) in state.amplitudes().iter().enumerate() {
        let k = gather_bits(b, keep, sites);
        let r = gather_bits(b, &traced, sites);
        m[(k, r)] = a;
    }
    let rho = &m * m.adjoint();
    Ok(DensityMatrix { matrix: rho })
}

/// Packs the bits of the given sites (in order, first = most significant).
#[inline]
fn gather_bits(b: usize, sites_list: &[usize], sites: usize) -> usize {
    sites_list
        .iter()
        .fold(0, |acc, &s| (acc << 1) | ((b >> site_shift(s, sites)) & 1))
}

/// −Σ λ log₂ λ over the eigenvalues of `rho`, in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    check_density(rho.matrix())?;
    let eig = SymmetricEigen::new(rho.matrix().clone());
    let s: f64 = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > ENTROPY_CLAMP)
        .map(|&l| -l * l.log2())
        .sum();
    let max = (rho.dim() as f64).log2();
    // + 0.0 maps −0 to +0
    Ok(s.clamp(0.0, max) + 0.0)
}

/// ⟨ψ|σ_z(site)|ψ⟩ from masked amplitude sums.
pub fn expectation_sigma_z(state: &StateVector, site: usize) -> Result<f64> {
    check_site(site, state.sites())?;
    let mask = 1usize << site_shift(site, state.sites());
    let v: f64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(b, a)| if b & mask == 0 { a.norm_sqr() } else { -a.norm_sqr() })
        .sum();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_state(sites: usize, rng: &mut ChaCha8Rng) -> StateVector {
        StateVector::random(sites, rng).unwrap()
    }

    /// Kronecker product by explicit index loops.
    fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
        let (ar, ac) = a.shape();
        let (br, bc) = b.shape();
        let mut out = DMatrix::from_element(ar * br, ac * bc, ZERO);
        for i in 0..ar {
            for j in 0..ac {
                for k in 0..br {
                    for l in 0..bc {
                        out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                    }
                }
            }
        }
        out
    }

    fn to_dyn(m: &Matrix2<C64>) -> DMatrix<C64> {
        DMatrix::from_fn(2, 2, |i, j| m[(i, j)])
    }

    #[test]
    fn sigma_z_on_first_of_two() {
        let op = embed_site_operator(&pauli_z(), 1, 2).unwrap();
        let want = [1.0, 1.0, -1.0, -1.0];
        for (i, &d) in want.iter().enumerate() {
            for j in 0..4 {
                let w = if i == j { d } else { 0.0 };
                assert_eq!(op.matrix[(i, j)], C64::new(w, 0.0));
            }
        }
        assert!(op.hermitian);
    }

    #[test]
    fn identity_embeds_to_identity() {
        for site in 1..=4 {
            let op = embed_site_operator(&identity2(), site, 4).unwrap();
            assert_eq!(op.matrix, DMatrix::identity(16, 16));
        }
    }

    #[test]
    fn sigma_x_middle_site_matches_kronecker() {
        let id = to_dyn(&identity2());
        let want = kron(&kron(&id, &to_dyn(&pauli_x())), &id);
        let got = embed_site_operator(&pauli_x(), 2, 3).unwrap();
        assert_eq!(got.matrix, want);
    }

    #[test]
    fn embed_rejects_bad_site() {
        assert!(matches!(
            embed_site_operator(&pauli_z(), 4, 3),
            Err(Error::SiteOutOfRange { site: 4, sites: 3 })
        ));
        assert!(embed_site_operator(&pauli_z(), 0, 3).is_err());
    }

    #[test]
    fn embedded_sigma_z_is_signed_diagonal() {
        for site in 1..=4 {
            let op = embed_site_operator(&pauli_z(), site, 4).unwrap();
            for b in 0..16 {
                let bit = (b >> (4 - site)) & 1;
                let sign = if bit == 0 { 1.0 } else { -1.0 };
                assert_eq!(op.matrix[(b, b)].re, sign);
            }
        }
    }

    #[test]
    fn bell_state_half_is_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::new(2, vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)]).unwrap();
        let rho = partial_trace(&bell, &[1]).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-15);
        assert!((von_neumann_entropy(&rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_basis_state_reduces_to_projector() {
        // b = 0b1011 on 4 sites: spins (down, up, down, down)
        let psi = StateVector::basis(4, 0b1011).unwrap();
        let rho = partial_trace(&psi, &[2, 3]).unwrap();
        // kept bits (site2, site3) = (0, 1) -> reduced index 1
        for i in 0..4 {
            for j in 0..4 {
                let w = if i == 1 && j == 1 { 1.0 } else { 0.0 };
                assert_eq!(rho.matrix()[(i, j)].re, w);
            }
        }
        assert_eq!(von_neumann_entropy(&rho).unwrap(), 0.0);
    }

    #[test]
    fn partial_trace_matches_index_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let psi = random_state(3, &mut rng);
        let a = psi.amplitudes();
        let rho = partial_trace(&psi, &[1, 3]).unwrap();
        // keep sites 1 and 3: bits 2 and 0; traced site 2 is bit 1
        for k1 in 0..2 {
            for k3 in 0..2 {
                for l1 in 0..2 {
                    for l3 in 0..2 {
                        let mut sum = ZERO;
                        for m in 0..2 {
                            let ket = (k1 << 2) | (m << 1) | k3;
                            let bra = (l1 << 2) | (m << 1) | l3;
                            sum += a[ket] * a[bra].conj();
                        }
                        let got = rho.matrix()[((k1 << 1) | k3, (l1 << 1) | l3)];
                        assert!((got - sum).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn partial_trace_rejects_bad_keep() {
        let psi = StateVector::basis(3, 0).unwrap();
        assert!(partial_trace(&psi, &[]).is_err());
        assert!(partial_trace(&psi, &[2, 1]).is_err());
        assert!(partial_trace(&psi, &[1, 1]).is_err());
        assert!(partial_trace(&psi, &[4]).is_err());
    }

    #[test]
    fn entropy_of_diagonal_quarter() {
        let rho = DensityMatrix::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(0.25, 0.0),
            C64::new(0.75, 0.0),
        ])))
        .unwrap();
        let want = -0.25f64 * 0.25f64.log2() - 0.75 * 0.75f64.log2();
        // independent scalar route through natural logs
        let alt = -(0.25f64 * 0.25f64.ln() + 0.75 * 0.75f64.ln()) / std::f64::consts::LN_2;
        assert!((want - alt).abs() < 1e-15);
        assert!((von_neumann_entropy(&rho).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_invalid_input() {
        let mut m = DMatrix::from_element(2, 2, ZERO);
        m[(0, 0)] = C64::new(0.7, 0.0);
        m[(1, 1)] = C64::new(0.7, 0.0);
        assert!(matches!(DensityMatrix::new(m.clone()), Err(Error::InvalidTrace(_))));
        m[(1, 1)] = C64::new(0.3, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn sigma_z_expectation_simple_states() {
        // Néel on 4 sites: up, down, up, down -> 0b0101
        let neel = StateVector::basis(4, 0b0101).unwrap();
        assert_eq!(expectation_sigma_z(&neel, 1).unwrap(), 1.0);
        assert_eq!(expectation_sigma_z(&neel, 2).unwrap(), -1.0);
        let plus = StateVector::new(3, vec![C64::new(8f64.sqrt().recip(), 0.0); 8]).unwrap();
        for s in 1..=3 {
            assert!(expectation_sigma_z(&plus, s).unwrap().abs() < 1e-15);
        }
        assert!(expectation_sigma_z(&plus, 4).is_err());
    }

    #[test]
    fn sigma_z_expectation_matches_dense_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi = random_state(3, &mut rng);
        for site in 1..=3 {
            let dense = embed_site_operator(&pauli_z(), site, 3).unwrap().expectation(&psi).unwrap();
            assert!((dense.re - expectation_sigma_z(&psi, site).unwrap()).abs() < 1e-14);
            assert!(dense.im.abs() < 1e-14);
        }
    }

    #[test]
    fn state_constructor_checks() {
        assert!(matches!(
            StateVector::new(2, vec![ONE; 4]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            StateVector::new(2, vec![ONE; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(StateVector::basis(15, 0), Err(Error::InvalidLength(15))));
    }
}
