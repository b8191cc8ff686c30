//! The superposed-disorder protocol on a small XXZ chain.
//!
//! N profiles evolve the same initial state; projecting the ancilla back
//! onto its uniform superposition leaves the average of the N evolved
//! states. The direct average is checked against the explicit joint
//! ancilla-system evolution.

use mbl_superpose::observables::half_chain_entropy;
use mbl_superpose::superpose::{AncillaOracle, SuperpositionSpec};
use mbl_superpose::xxz::{neel_state, sample_fields, XxzParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mbl_superpose::Result<()> {
    let sites = 6;
    let params = XxzParams::new(sites, 1.0, 0.2, 3.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let psi0 = neel_state(sites)?;

    for n in [1, 2, 4] {
        let fields = (0..n).map(|_| sample_fields(sites, 3.0, &mut rng)).collect::<Result<Vec<_>, _>>()?;
        let spec = SuperpositionSpec::xxz(&params, &fields)?;
        let fast = spec.prepare(&psi0)?;
        let oracle = AncillaOracle::new(&spec, &psi0)?;
        println!("N = {n}");
        println!("{:>9} {:>10} {:>12} {:>12}", "gt", "S_vN", "P(success)", "|1-overlap|");
        for t in [0.0, 0.5, 2.0, 10.0, 100.0, 1000.0] {
            let (a, b) = (fast.at(t)?, oracle.at(t)?);
            let defect = (1.0 - a.state.inner(&b.state).norm()).abs();
            println!("{t:>9.1} {:>10.5} {:>12.6} {defect:>12.2e}", half_chain_entropy(&a.state)?, a.success_prob);
        }
        println!();
    }
    Ok(())
}
