//! Tabulates the closed-form matched-filter energy loss
//! (1+ρ_T+ρ_R+ρ_Tρ_R)^{-1/2} in dB and verifies it against waveforms
//! designed on actual Fourier geometries.
//!
//! Run with `cargo run --example mismatch_loss_grid`.

use nullcast::end_to_end::{build_pairwise, matched_filter_gain, mismatch_loss};
use nullcast::scenario::BasisKind;

fn main() -> nullcast::Result<()> {
    println!("closed-form loss [dB] over (rho_t, rho_r):");
    print!("        ");
    for j in 0..=5 {
        print!("  ρR={:<4.1}", j as f64 * 0.2);
    }
    println!();
    for i in 0..=5 {
        let rho_t = i as f64 * 0.2;
        print!("ρT={rho_t:<4.1}");
        for j in 0..=5 {
            let rho_r = j as f64 * 0.2;
            print!("  {:>7.3}", 20.0 * mismatch_loss(rho_t, rho_r).log10());
        }
        println!();
    }

    println!("\nconstructed-geometry check (K0 = 20, Fourier carriers):");
    println!("kappa  closed-form      designed        |error|");
    for kappa in [0usize, 2, 4, 6, 8, 10] {
        let geom = build_pairwise(64, 20, kappa, kappa, 0, BasisKind::Fourier, 3)?;
        let gain = matched_filter_gain(&geom)?;
        let closed = mismatch_loss(geom.rho_t(), geom.rho_r());
        println!(
            "{kappa:>5}  {closed:\u{a0}>11.8}  {gain:\u{a0}>13.8}  {:.2e}",
            (gain - closed).abs()
        );
    }
    Ok(())
}
