//! Shows that the total-least-squares route and the projector-column route
//! produce the same waveform, across basis families and uncertainty
//! levels.
//!
//! Run with `cargo run --example tls_equivalence`.

use nullcast::scenario::{self, BasisKind, UncertaintySpec};
use nullcast::signaling::{design_tls, design_waveform, select_column, TIE_TOL};
use nullcast::subspace::projector_from_basis;

fn main() -> nullcast::Result<()> {
    println!("seed  kind     N   D̂  K̂   column  ‖tls − column‖");
    for seed in 0..12u64 {
        let kind = match seed % 3 {
            0 => BasisKind::Fourier,
            1 => BasisKind::Canonical,
            _ => BasisKind::RandomOrthonormal,
        };
        let n = 12 + 4 * (seed as usize % 5);
        let d = n / 3;
        let spec = UncertaintySpec {
            eps: d / 3,
            delta: 0,
            false_alarms: (n - d) / 6,
        };
        let env = scenario::build(n, d, kind, spec, 100 + seed)?;
        let w_tls = design_tls(env.sensed_signal_basis())?;
        let p = projector_from_basis(env.sensed_noise_basis());
        let (col, _) = select_column(&p, TIE_TOL)?;
        let w_col = design_waveform(&p, col)?;
        let diff = (w_tls.samples() - w_col.samples()).norm();
        println!(
            "{seed:>4}  {kind:<8} {n:>3} {:>3} {:>3}  {col:>6}  {diff:.3e}",
            env.d_hat(),
            env.k_hat(),
            kind = format!("{kind:?}").chars().take(8).collect::<String>(),
        );
    }
    Ok(())
}
