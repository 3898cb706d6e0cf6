//! Designs the shaping waveform for a sensed Fourier scenario and prints
//! its spectrum: exact nulls on every carrier sensed as occupied, near-flat
//! use of the carriers sensed as available.
//!
//! Run with `cargo run --example psd_nulls`.

use nullcast::scenario::{self, BasisKind, UncertaintySpec};
use nullcast::signaling::{design_waveform, psd, select_column, TIE_TOL};
use nullcast::subspace::projector_from_basis;

fn main() -> nullcast::Result<()> {
    let n = 32;
    let d = 12;
    let env = scenario::build(n, d, BasisKind::Fourier, UncertaintySpec::NONE, 5)?;
    println!(
        "N = {n} carriers, {d} occupied, {} sensed available",
        env.k_hat()
    );

    let p = projector_from_basis(env.sensed_noise_basis());
    let (col, ties) = select_column(&p, TIE_TOL)?;
    println!(
        "selected projector column {col} (tie set of {} columns — flat diagonal)",
        ties.len()
    );
    let w = design_waveform(&p, col)?;
    let spectrum = psd(&w, n)?;

    // Carrier occupancy through the ground-truth split.
    let occupied = env.true_signal_basis()?;
    let mut occupied_bins = vec![false; n];
    for j in 0..occupied.dim() {
        let c = occupied.column(j);
        let phase = (c[1] / c[0]).arg();
        let k = ((phase / (2.0 * std::f64::consts::PI) * n as f64).round() as i64)
            .rem_euclid(n as i64) as usize;
        occupied_bins[k] = true;
    }

    println!("carrier  occupied   psd [dB]");
    for (k, v) in spectrum.iter().enumerate() {
        println!(
            "{k:>7}  {}   {v:>9.2}",
            if occupied_bins[k] { "yes     " } else { "no      " }
        );
    }
    let worst = spectrum
        .iter()
        .enumerate()
        .filter(|(k, _)| occupied_bins[*k])
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    println!("\ndeepest occupied-carrier level: {worst:.1} dB below peak");
    Ok(())
}
