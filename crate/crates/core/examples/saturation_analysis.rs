//! Saturation value and saturation time of ensemble-mean entanglement.
//!
//! The window is sampled with 20 extra linear points. The robust time needs
//! the curve to stay in the ε band; the first crossing only needs it to
//! enter once.

use mbl_superpose::ensemble::{make_time_grid_with_window, run_ensemble, ExperimentSpec, ModelSpec, Observable, Quantity};
use mbl_superpose::observables::{saturation_time, saturation_value, TimeSeries};
use mbl_superpose::xxz::XxzParams;

fn main() -> mbl_superpose::Result<()> {
    let window = (1e5, 1e6);
    let times = make_time_grid_with_window(0.1, 1e6, 4, Some(window), 20)?;
    println!("{:>3} {:>4} {:>9} {:>9} {:>14} {:>14} {:>14}", "W", "N", "S_sat", "I_sat", "T_sat eps=0.05", "T_sat eps=0.01", "first cross");
    for w in [1.0, 3.0, 5.0] {
        for n in [1, 10] {
            let spec = ExperimentSpec {
                model: ModelSpec::Xxz(XxzParams::new(6, 1.0, 0.2, w)?),
                n_profiles: n,
                n_realizations: 300,
                times: times.clone(),
                master_seed: 1,
                observables: vec![Observable::Entropy, Observable::Imbalance],
                sector_reduction: true,
            };
            let r = run_ensemble(&spec)?;
            let s = TimeSeries::new("S_vN", times.clone(), r.mean(Quantity::EntropyVn).unwrap().to_vec())?;
            let i = TimeSeries::new("I", times.clone(), r.mean(Quantity::ImbalanceNorm).unwrap().to_vec())?;
            let s_sat = saturation_value(&s, window.0, window.1)?;
            let show = |t: Option<f64>| t.map_or("not saturated".to_string(), |t| format!("{t:.2e}"));
            let coarse = saturation_time(&s, s_sat, 0.05)?;
            let fine = saturation_time(&s, s_sat, 0.01)?;
            println!(
                "{w:>3} {n:>4} {s_sat:>9.4} {:>9.4} {:>14} {:>14} {:>14}",
                saturation_value(&i, window.0, window.1)?,
                show(coarse.robust),
                show(fine.robust),
                show(fine.first_crossing)
            );
        }
    }
    Ok(())
}
