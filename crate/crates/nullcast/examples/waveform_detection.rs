//! Transmits a randomly selected waveform-book entry and detects it at
//! the receiver by spectral coherence, sweeping the pulse energy.
//!
//! Run with `cargo run --example waveform_detection`.

use nullcast::end_to_end::{
    build_pairwise, detect_waveform, simulate_received, snr_with_uncertainty, ChannelParams,
};
use nullcast::scenario::BasisKind;
use nullcast::signaling::{design_waveform, waveform_book};
use nullcast::subspace::projector_from_basis;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nullcast::Result<()> {
    let geom = build_pairwise(64, 40, 12, 12, 0, BasisKind::Fourier, 1)?;
    let p_t = projector_from_basis(geom.tx_basis());
    let book_r = waveform_book(&projector_from_basis(geom.rx_basis()));
    let trials = 400u64;
    let q = 4;

    println!("Ep/N0 [dB]   Γ_unc [dB]   P(detect)");
    for ep_db in [-6.0, -3.0, 0.0, 3.0, 6.0, 9.0] {
        let p = ChannelParams {
            gain: 1.0,
            tx_power: 1.0,
            noise_density: 1.0,
            inr_bar: 0.0,
            ep_over_n0_db: ep_db,
        };
        let (_, gamma) = snr_with_uncertainty(&p, &geom);
        let mut hits = 0u64;
        for t in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(900 + t);
            let col = rng.random_range(0..64usize);
            let w = design_waveform(&p_t, col)?;
            let frames = simulate_received(&geom, &p, q, &w, 10_000 + t);
            if detect_waveform(&frames, &book_r, geom.rx_basis(), 1e-3)? == col {
                hits += 1;
            }
        }
        println!(
            "{ep_db:>10.1}   {:>10.2}   {:>9.3}",
            10.0 * gamma.log10(),
            hits as f64 / trials as f64
        );
    }
    Ok(())
}
