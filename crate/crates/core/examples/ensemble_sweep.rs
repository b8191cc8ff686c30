//! Seeded disorder-ensemble sweep over the number of superposed profiles.
//!
//! Usage: `cargo run --release --example ensemble_sweep [realizations]`

use mbl_superpose::ensemble::{make_time_grid, run_ensemble, ExperimentSpec, ModelSpec, Observable, Quantity};
use mbl_superpose::xxz::XxzParams;

fn main() -> mbl_superpose::Result<()> {
    let realizations = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let times = make_time_grid(0.1, 1e6, 1)?;
    let mut results = Vec::new();
    for n in [1, 2, 10] {
        let spec = ExperimentSpec {
            model: ModelSpec::Xxz(XxzParams::new(8, 1.0, 0.2, 3.0)?),
            n_profiles: n,
            n_realizations: realizations,
            times: times.clone(),
            master_seed: 1,
            observables: Observable::ALL.to_vec(),
            sector_reduction: true,
        };
        let r = run_ensemble(&spec)?;
        eprintln!("N={n}: {} realizations in {:.1} s", r.metadata.realizations_completed, r.metadata.wall_time_s);
        results.push((n, r));
    }

    print!("{:>8}", "gt");
    for (n, _) in &results {
        print!(" {:>17} {:>8}", format!("S_vN(N={n})"), "I/L");
    }
    println!();
    for (k, t) in times.iter().enumerate() {
        print!("{t:>8.0e}");
        for (_, r) in &results {
            let (s, e) = (r.mean(Quantity::EntropyVn).unwrap()[k], r.sem(Quantity::EntropyVn).unwrap()[k]);
            print!(" {:>9.4} ± {:.4} {:>8.4}", s, e, r.mean(Quantity::ImbalanceNorm).unwrap()[k]);
        }
        println!();
    }
    for (n, r) in &results {
        println!("N={n}: mean postselection probability {:.4}, min {:.2e}", r.success_prob_mean, r.success_prob_min);
    }
    Ok(())
}
