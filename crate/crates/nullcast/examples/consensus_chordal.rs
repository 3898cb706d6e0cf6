//! Measures how well the two ends agree on the effective subspace: the
//! normalized chordal distance between the modified projectors after
//! concurrence, for both schemes.
//!
//! Run with `cargo run --example consensus_chordal`.

use nullcast::harness::{compute_experiment, Experiment, ExperimentConfig};

fn main() -> nullcast::Result<()> {
    let cfg = ExperimentConfig {
        trials: 200,
        ep_over_n0_db: vec![10.0, 20.0],
        q_list: vec![10, 100],
        p_fa_list: vec![0.1, 0.001],
        seed: 11,
        ..Default::default()
    };

    let result = compute_experiment(Experiment::Chordal, &cfg)?;
    println!("Ep/N0 [dB]    Q     P_FA     scheme      mean d²/max(K̂₀)");
    for row in result
        .aggregates
        .iter()
        .filter(|r| r.quantity.starts_with("chordal_"))
    {
        let get = |key: &str| {
            row.params
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| v.clone())
                .unwrap_or_default()
        };
        println!(
            "{:>10} {:>4} {:>8}     {:<9}   {:.5}",
            get("ep_over_n0_db"),
            get("q"),
            get("p_fa"),
            row.quantity.trim_start_matches("chordal_"),
            row.value
        );
    }
    Ok(())
}
