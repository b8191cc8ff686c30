//! Reduced states and entropies of small spin states.
//!
//! Site 1 is the most significant bit of the basis index; bit 0 is spin up.

use mbl_superpose::hilbert::{embed_site_operator, partial_trace, pauli_x, von_neumann_entropy};
use mbl_superpose::observables::half_chain_entropy;
use mbl_superpose::{StateVector, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mbl_superpose::Result<()> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = StateVector::new(2, vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)])?;
    let rho = partial_trace(&bell, &[1])?;
    println!("Bell pair: S(site 1) = {:.6} bits, purity = {:.6}", von_neumann_entropy(&rho)?, rho.purity());

    // flipping site 2 of |↑↑⟩ gives a product state
    let flip = embed_site_operator(&pauli_x(), 2, 2)?;
    let up = StateVector::basis(2, 0)?;
    let flipped = &flip.matrix * nalgebra::DVector::from_column_slice(up.amplitudes());
    let flipped = StateVector::new(2, flipped.as_slice().to_vec())?;
    println!("σx on site 2 of |↑↑⟩ -> index {}", flipped.amplitudes().iter().position(|a| a.norm() > 0.5).unwrap());
    println!("product state half-chain entropy = {:.3e}", half_chain_entropy(&flipped)?);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for sites in [4, 6, 8, 10] {
        let psi = StateVector::random(sites, &mut rng)?;
        let left: Vec<usize> = (1..=sites / 2).collect();
        let right: Vec<usize> = (sites / 2 + 1..=sites).collect();
        let (sl, sr) = (
            von_neumann_entropy(&partial_trace(&psi, &left)?)?,
            von_neumann_entropy(&partial_trace(&psi, &right)?)?,
        );
        println!("random L={sites:>2}: S_left = {sl:.4}, S_right = {sr:.4}, max {}", sites / 2);
    }
    Ok(())
}
