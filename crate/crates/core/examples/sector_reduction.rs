//! Evolving inside the Néel state's magnetization sector.
//!
//! The XXZ Hamiltonian conserves total S_z, so the 2^L problem reduces to
//! a block of dimension C(L, L/2). Both routes give the same state.

use std::time::Instant;

use mbl_superpose::propagator::eigendecompose;
use mbl_superpose::xxz::{build_xxz_hamiltonian, build_xxz_sector_hamiltonian, neel_state, sample_fields, sz_sector_projector, XxzParams};
use mbl_superpose::StateVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mbl_superpose::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for sites in [6, 8, 10] {
        let params = XxzParams::new(sites, 1.0, 0.2, 3.0)?;
        let fields = sample_fields(sites, 3.0, &mut rng)?;
        let psi0 = neel_state(sites)?;
        let t = 50.0;

        let clock = Instant::now();
        let full = eigendecompose(&build_xxz_hamiltonian(&params, &fields)?)?.evolve(&psi0, t)?;
        let full_time = clock.elapsed();

        let clock = Instant::now();
        let sector = sz_sector_projector(sites, 0.0)?;
        let block = eigendecompose(&build_xxz_sector_hamiltonian(&params, &fields, &sector)?)?;
        let c = block.project(&sector.restrict(&psi0)?);
        let reduced = StateVector::new(sites, sector.embed(&block.reconstruct(&c, t)))?;
        let sector_time = clock.elapsed();

        println!(
            "L={sites:>2}: dim {:>5} -> {:>4}, full {:>9.2?}, sector {:>9.2?}, |1-overlap| {:.1e}",
            1usize << sites,
            sector.dim(),
            full_time,
            sector_time,
            (1.0 - full.inner(&reduced).norm()).abs()
        );
    }
    Ok(())
}
