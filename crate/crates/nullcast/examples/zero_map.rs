//! Prints the z-plane zeros of the designed waveform for the two extreme
//! sensing cases: without uncertainty the zeros pin the occupied carriers
//! on the unit circle (plus extraneous zeros inside); under maximum
//! uncertainty the single-DoF representative spreads its zeros uniformly
//! on one circle.
//!
//! Run with `cargo run --example zero_map`.

use nullcast::scenario::{self, BasisKind, UncertaintySpec};
use nullcast::signaling::{basis_waveform, design_waveform, select_column, zeros, TIE_TOL};
use nullcast::subspace::projector_from_basis;

fn main() -> nullcast::Result<()> {
    let n = 32;
    let d = 12;

    let env = scenario::build(n, d, BasisKind::Fourier, UncertaintySpec::NONE, 5)?;
    let p = projector_from_basis(env.sensed_noise_basis());
    let (col, _) = select_column(&p, TIE_TOL)?;
    let w = design_waveform(&p, col)?;
    let roots = zeros(&w)?;
    println!("no uncertainty: {} zeros", roots.len());
    let on_circle = roots.iter().filter(|z| (z.norm() - 1.0).abs() < 1e-6).count();
    println!("  {} on the unit circle (occupied carriers), {} inside", on_circle, roots.len() - on_circle);
    for z in &roots {
        println!("  |z| = {:.6}  arg = {:+.4} rad", z.norm(), z.arg());
    }

    let env_max = scenario::build(
        n,
        d,
        BasisKind::Fourier,
        UncertaintySpec { eps: d, delta: 0, false_alarms: 0 },
        5,
    )?;
    let w_max = basis_waveform(env_max.sensed_noise_basis(), 0);
    let roots = zeros(&w_max)?;
    println!("\nmaximum uncertainty: {} zeros, all on one circle", roots.len());
    let radii: Vec<f64> = roots.iter().map(|z| z.norm()).collect();
    let spread = radii.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - radii.iter().cloned().fold(f64::INFINITY, f64::min);
    println!("  radius spread: {spread:.2e}, angular pitch 2π/{n}");
    Ok(())
}
