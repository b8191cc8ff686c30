//! Néel-state quench of one disordered XXZ chain.
//!
//! Prints half-chain entropy and imbalance on a logarithmic time grid for
//! an interacting and a non-interacting chain with the same fields.

use mbl_superpose::ensemble::make_time_grid;
use mbl_superpose::observables::{half_chain_entropy, imbalance};
use mbl_superpose::propagator::eigendecompose;
use mbl_superpose::xxz::{build_xxz_hamiltonian, neel_state, sample_fields, XxzParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mbl_superpose::Result<()> {
    let (sites, w) = (8, 3.0);
    let fields = sample_fields(sites, w, &mut ChaCha8Rng::seed_from_u64(7))?;
    println!("fields: {:?}", fields.fields.iter().map(|h| format!("{h:+.2}")).collect::<Vec<_>>());

    let psi0 = neel_state(sites)?;
    for delta in [0.2, 0.0] {
        let params = XxzParams::new(sites, 1.0, delta, w)?;
        let prop = eigendecompose(&build_xxz_hamiltonian(&params, &fields)?)?;
        println!("\nΔ = {delta}");
        println!("{:>10} {:>10} {:>10}", "gt", "S_vN", "I/L");
        for t in make_time_grid(0.1, 1e8, 1)? {
            let psi = prop.evolve(&psi0, t)?;
            println!("{t:>10.1e} {:>10.5} {:>10.5}", half_chain_entropy(&psi)?, imbalance(&psi).normalized);
        }
    }
    Ok(())
}
