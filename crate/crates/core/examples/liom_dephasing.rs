//! Dephasing of the first l-bit under a diagonal two-body Hamiltonian.
//!
//! The numerically evolved coherence is compared with the closed-form
//! product of cosines, and the linear entropy (1 − |φ|²)/2 is printed.

use mbl_superpose::liom::{analytic_dephasing, build_diagonal_hamiltonian, evolve_diagonal, plus_product_state, LiomCouplings};
use mbl_superpose::observables::linear_entropy;
use mbl_superpose::superpose::{effective_dephasing_factor, ConditionalResult};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mbl_superpose::Result<()> {
    let sites = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let couplings = LiomCouplings::sample(sites, 1.0, 0.3, &mut rng)?;
    for j in 2..=sites {
        println!("J_1{j} = {:+.3e}  (bound {:.3e})", couplings.get(1, j), couplings.bound(1, j));
    }

    let h = build_diagonal_hamiltonian(&couplings);
    let psi0 = plus_product_state(sites)?;
    println!("\n{:>10} {:>14} {:>14} {:>10}", "Jt", "|phi| numeric", "|phi| analytic", "S_L");
    for k in 0..=12 {
        let t = 10f64.powf(-1.0 + 0.5 * k as f64);
        let state = evolve_diagonal(&h, &psi0, t)?;
        let phi = effective_dephasing_factor(&ConditionalResult { state, success_prob: 1.0 }, 1)?;
        let exact = analytic_dephasing(&couplings, t);
        println!("{t:>10.2e} {:>14.8} {:>14.8} {:>10.6}", phi.norm(), exact.norm(), linear_entropy(exact));
    }
    Ok(())
}
