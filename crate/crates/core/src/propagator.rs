//! Dense Hermitian Hamiltonians and their cached eigendecompositions.
//!
//! A [`Propagator`] is built once per Hamiltonian and then applied at any
//! number of times: `ψ(t) = V e^{−iEt} V† ψ₀`. Real symmetric inputs (the XXZ
//! chain) take a real eigensolver path.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::hilbert::{hermiticity_defect, StateVector, C64, ZERO};

const HERMITIAN_REL_TOL: f64 = 1e-12;

/// Square Hermitian matrix in some working basis (full space or a sector).
#[derive(Clone, Debug)]
pub struct DenseHamiltonian {
    matrix: DMatrix<C64>,
}

impl DenseHamiltonian {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_REL_TOL * scale {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { matrix })
    }

    pub fn from_real(matrix: DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(|x| C64::new(x, 0.0)))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::from_element(n, n, ZERO);
        for (i, &e) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(e, 0.0);
        }
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    /// Block-diagonal direct sum `⊕_p H_p`.
    pub fn direct_sum(blocks: &[&DenseHamiltonian]) -> Self {
        let dim: usize = blocks.iter().map(|b| b.dim()).sum();
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        let mut off = 0;
        for b in blocks {
            let d = b.dim();
            m.view_mut((off, off), (d, d)).copy_from(&b.matrix);
            off += d;
        }
        Self { matrix: m }
    }
}

/// Eigendecomposition `H = V diag(E) V†` with ascending energies.
#[derive(Clone, Debug)]
pub struct Propagator {
    energies: Vec<f64>,
    vectors: DMatrix<C64>,
    // kept alongside `vectors` when the Hamiltonian is real; halves the
    // cost of every matrix-vector product
    real_vectors: Option<DMatrix<f64>>,
}

pub fn eigendecompose(h: &DenseHamiltonian) -> Result<Propagator> {
    Propagator::new(h)
}

impl Propagator {
    pub fn new(h: &DenseHamiltonian) -> Result<Self> {
        let n = h.dim();
        let max_iter = 1000 * n.max(1);
        if h.is_real() {
            let real = h.matrix().map(|z| z.re);
            let eig = SymmetricEigen::try_new(real, f64::EPSILON, max_iter).ok_or(Error::EigenNoConvergence)?;
            let order = ascending(eig.eigenvalues.as_slice());
            let energies: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
            let vecs = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
            Ok(Self {
                energies,
                vectors: vecs.map(|x| C64::new(x, 0.0)),
                real_vectors: Some(vecs),
            })
        } else {
            let eig = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, max_iter)
                .ok_or(Error::EigenNoConvergence)?;
            let order = ascending(eig.eigenvalues.as_slice());
            let energies: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
            let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
            Ok(Self { energies, vectors, real_vectors: None })
        }
    }

    /// Assembles a propagator from given parts without any checks. Used to
    /// inject faults into the self-check machinery.
    pub fn from_parts(energies: Vec<f64>, vectors: DMatrix<C64>) -> Self {
        Self { energies, vectors, real_vectors: None }
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn vectors(&self) -> &DMatrix<C64> {
        &self.vectors
    }

    /// Eigenbasis coefficients `V† ψ`.
    pub fn project(&self, psi: &[C64]) -> Vec<C64> {
        let n = self.dim();
        debug_assert_eq!(psi.len(), n);
        match &self.real_vectors {
            Some(v) => (0..n)
                .map(|k| {
                    let col = v.column(k);
                    col.iter().zip(psi).map(|(&x, a)| a * x).sum()
                })
                .collect(),
            None => (0..n)
                .map(|k| {
                    let col = self.vectors.column(k);
                    col.iter().zip(psi).map(|(x, a)| x.conj() * a).sum()
                })
                .collect(),
        }
    }

    /// Adds `weight · V e^{−iEt} c` to `out`.
    pub fn accumulate(&self, coeffs: &[C64], t: f64, weight: f64, out: &mut [C64]) {
        let n = self.dim();
        debug_assert_eq!(coeffs.len(), n);
        debug_assert_eq!(out.len(), n);
        for (k, (&c, &e)) in coeffs.iter().zip(self.energies.iter()).enumerate() {
            let z = c * C64::from_polar(weight, -e * t);
            if z == ZERO {
                continue;
            }
            match &self.real_vectors {
                Some(v) => {
                    for (o, &x) in out.iter_mut().zip(v.column(k).iter()) {
                        o.re += x * z.re;
                        o.im += x * z.im;
                    }
                }
                None => {
                    for (o, x) in out.iter_mut().zip(self.vectors.column(k).iter()) {
                        *o += x * z;
                    }
                }
            }
        }
    }

    /// `V e^{−iEt} c`
    pub fn reconstruct(&self, coeffs: &[C64], t: f64) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim()];
        self.accumulate(coeffs, t, 1.0, &mut out);
        out
    }

    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        let c = self.project(psi.amplitudes());
        StateVector::unchecked(psi.sites(), self.reconstruct(&c, t))
    }

    /// Relative Frobenius error of `V E V†` against `h`.
    pub fn reconstruction_error(&self, h: &DenseHamiltonian) -> f64 {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            self.energies.iter().map(|&e| C64::new(e, 0.0)),
        ));
        let rebuilt = &self.vectors * d * self.vectors.adjoint();
        let scale = h.matrix().norm().max(1.0);
        (rebuilt - h.matrix()).norm() / scale
    }

    /// Frobenius distance of `V†V` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        (self.vectors.adjoint() * &self.vectors - DMatrix::<C64>::identity(n, n)).norm()
    }
}

/// ψ(t) = V e^{−iEt} V† ψ₀
pub fn evolve(prop: &Propagator, psi: &StateVector, t: f64) -> Result<StateVector> {
    prop.evolve(psi, t)
}

fn ascending(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}
