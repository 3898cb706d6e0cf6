//! Receiver-side identification of the effective noise subspace:
//! empirical detection and false-alarm rates under the Neyman–Pearson
//! threshold, across block lengths and pulse energies.
//!
//! Run with `cargo run --example receiver_roc`.

use nullcast::end_to_end::{build_pairwise, simulate_received, ChannelParams};
use nullcast::identification::{identify_dimensions, np_threshold};
use nullcast::scenario::BasisKind;
use nullcast::signaling::{design_waveform, select_column, TIE_TOL};
use nullcast::subspace::projector_from_basis;

fn main() -> nullcast::Result<()> {
    let geom = build_pairwise(64, 40, 12, 12, 0, BasisKind::Fourier, 1)?;
    let p_t = projector_from_basis(geom.tx_basis());
    let w = design_waveform(&p_t, select_column(&p_t, TIE_TOL)?.0)?;
    let trials = 500u64;

    println!("Ep/N0 [dB]    Q   P_FA target   P_D      P_FA empirical");
    for ep_db in [0.0, 10.0, 20.0] {
        let p = ChannelParams {
            gain: 1.0,
            tx_power: 1.0,
            noise_density: 1.0,
            inr_bar: 0.0,
            ep_over_n0_db: ep_db,
        };
        for q in [1usize, 10, 100] {
            for p_fa in [0.1, 0.01] {
                let thr = np_threshold(p.noise_density / 2.0, q, p_fa)?;
                let mut hit = 0u64;
                let mut fa = 0u64;
                for t in 0..trials {
                    let frames = simulate_received(&geom, &p, q, &w, 5_000 + t);
                    let sel = identify_dimensions(&frames, geom.rx_basis(), &thr)?;
                    hit += sel.lambda[..geom.k0()].iter().filter(|&&b| b).count() as u64;
                    fa += sel.lambda[geom.k0()..].iter().filter(|&&b| b).count() as u64;
                }
                println!(
                    "{ep_db:>10.1} {q:>4}   {p_fa:>10.2}   {:.4}   {:.4}",
                    hit as f64 / (trials * geom.k0() as u64) as f64,
                    fa as f64 / (trials * geom.kappa_r() as u64) as f64
                );
            }
        }
    }
    Ok(())
}
