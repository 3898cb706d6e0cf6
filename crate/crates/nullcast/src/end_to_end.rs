//! Pairwise transmitter/receiver geometry and the end-to-end consequences
//! of sensing mismatch.
//!
//! Both ends sense a noise subspace that contains the shared effective
//! subspace N₀ (dimension K₀) plus their own excess blocks Δ_T and Δ_R
//! (dimensions κ_T, κ_R). With the shaping waveform designed independently
//! at each end, the matched filter keeps the energy injected into N₀ and
//! pays only the closed-form factor
//!
//!   (1 + ρ_T + ρ_R + ρ_T ρ_R)^{-1/2},   ρ = κ/K₀,
//!
//! exact whenever the basis family has a flat projector diagonal (Fourier
//! carriers). The received per-DoF model and its SNR degradation Γ_unc
//! follow the same bookkeeping.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scenario::BasisKind;
use crate::signaling::{design_waveform, select_column, Waveform, WaveformBook, TIE_TOL};
use crate::subspace::{projector_from_basis, ComplexVector, SubspaceBasis};

/// Three mutually orthogonal blocks: the shared effective noise subspace
/// and the per-end excesses.
#[derive(Debug, Clone)]
pub struct MismatchGeometry {
    shared: SubspaceBasis,
    delta_t: SubspaceBasis,
    delta_r: SubspaceBasis,
    tx_basis: SubspaceBasis,
    rx_basis: SubspaceBasis,
    eps_r: usize,
}

impl MismatchGeometry {
    pub fn ambient_dim(&self) -> usize {
        self.shared.ambient_dim()
    }

    pub fn k0(&self) -> usize {
        self.shared.dim()
    }

    pub fn kappa_t(&self) -> usize {
        self.delta_t.dim()
    }

    pub fn kappa_r(&self) -> usize {
        self.delta_r.dim()
    }

    /// Interfered portion of the receiver excess, ε_R ≤ κ_R.
    pub fn eps_r(&self) -> usize {
        self.eps_r
    }

    pub fn rho_t(&self) -> f64 {
        self.kappa_t() as f64 / self.k0() as f64
    }

    pub fn rho_r(&self) -> f64 {
        self.kappa_r() as f64 / self.k0() as f64
    }

    pub fn shared_basis(&self) -> &SubspaceBasis {
        &self.shared
    }

    pub fn delta_t(&self) -> &SubspaceBasis {
        &self.delta_t
    }

    pub fn delta_r(&self) -> &SubspaceBasis {
        &self.delta_r
    }

    /// Transmitter's sensed noise basis [Ψ⁽⁰⁾ ⋮ Δ_T], dimension K̂_T.
    pub fn tx_basis(&self) -> &SubspaceBasis {
        &self.tx_basis
    }

    /// Receiver's sensed noise basis [Ψ⁽⁰⁾ ⋮ Δ_R], dimension K̂_R.
    pub fn rx_basis(&self) -> &SubspaceBasis {
        &self.rx_basis
    }

    pub fn k_hat_t(&self) -> usize {
        self.tx_basis.dim()
    }

    pub fn k_hat_r(&self) -> usize {
        self.rx_basis.dim()
    }

    /// The same geometry seen from the other end of the link (TDD reverse
    /// direction): the roles of the two excess blocks swap. Interference
    /// bookkeeping stays with the forward receiver.
    pub fn reversed(&self) -> MismatchGeometry {
        MismatchGeometry {
            shared: self.shared.clone(),
            delta_t: self.delta_r.clone(),
            delta_r: self.delta_t.clone(),
            tx_basis: self.rx_basis.clone(),
            rx_basis: self.tx_basis.clone(),
            eps_r: 0,
        }
    }
}

/// Draws K₀+κ_T+κ_R distinct columns from the chosen family: the first K₀
/// are shared, the rest split into the two excess blocks.
pub fn build_pairwise(
    n: usize,
    k0: usize,
    kappa_t: usize,
    kappa_r: usize,
    eps_r: usize,
    kind: BasisKind,
    seed: u64,
) -> Result<MismatchGeometry> {
    if k0 == 0 || k0 + kappa_t + kappa_r > n {
        return Err(Error::Infeasible(format!(
            "K0+kappaT+kappaR = {} does not fit N = {n}",
            k0 + kappa_t + kappa_r
        )));
    }
    if eps_r > kappa_r {
        return Err(Error::Infeasible(format!(
            "eps_r = {eps_r} exceeds kappa_r = {kappa_r}"
        )));
    }
    // The leftover columns play the occupied part of the environment; only
    // the pool of available DoF is used here.
    let (_occupied, pool) =
        crate::scenario::generate_environment(n, n - (k0 + kappa_t + kappa_r), kind, seed)?;
    let shared = pool.select(&(0..k0).collect::<Vec<_>>());
    let delta_t = pool.select(&(k0..k0 + kappa_t).collect::<Vec<_>>());
    let delta_r = pool.select(&(k0 + kappa_t..k0 + kappa_t + kappa_r).collect::<Vec<_>>());
    let tx_basis = shared.concat(&delta_t)?;
    let rx_basis = shared.concat(&delta_r)?;
    Ok(MismatchGeometry {
        shared,
        delta_t,
        delta_r,
        tx_basis,
        rx_basis,
        eps_r,
    })
}

/// Channel and power bookkeeping shared by the closed forms and the frame
/// simulator.
#[derive(Debug, Clone, Copy)]
pub struct ChannelParams {
    /// Amplitude gain G of the opportunistic link.
    pub gain: f64,
    /// Transmit power S_T (normalized watts), used by the closed-form SNR.
    pub tx_power: f64,
    /// Noise density N₀ per DoF.
    pub noise_density: f64,
    /// Average interference-to-noise ratio per interfered DoF (linear).
    pub inr_bar: f64,
    /// Pulse energy to noise density, in dB; drives the frame simulator.
    pub ep_over_n0_db: f64,
}

impl ChannelParams {
    /// Pulse energy E_p implied by the Ep/N₀ setting.
    pub fn pulse_energy(&self) -> f64 {
        self.noise_density * 10f64.powf(self.ep_over_n0_db / 10.0)
    }
}

/// Closed-form matched-filter gain (1+ρ_T+ρ_R+ρ_Tρ_R)^{-1/2} ∈ (0, 1].
pub fn mismatch_loss(rho_t: f64, rho_r: f64) -> f64 {
    debug_assert!(rho_t >= 0.0 && rho_r >= 0.0);
    1.0 / (1.0 + rho_t + rho_r + rho_t * rho_r).sqrt()
}

/// Matched-filter gain φ̂_Rᴴ φ̂_T computed from actually designed waveforms
/// with a common column index at both ends.
///
/// For Fourier geometries the projector diagonals are flat and the value
/// equals [`mismatch_loss`] exactly; for other families it is the direct
/// inner product with no closed-form claim.
pub fn matched_filter_gain(geom: &MismatchGeometry) -> Result<f64> {
    let p_t = projector_from_basis(geom.tx_basis());
    let p_r = projector_from_basis(geom.rx_basis());
    let (n_star, _) = select_column(&p_t, TIE_TOL)?;
    let diag_r = p_r.diagonal();
    if diag_r[n_star] <= crate::signaling::DEGENERATE_DIAG {
        return Err(Error::ColumnUndefined { index: n_star });
    }
    let w_t = design_waveform(&p_t, n_star)?;
    let w_r = design_waveform(&p_r, n_star)?;
    Ok((w_r.samples().adjoint() * w_t.samples())[(0, 0)].re)
}

/// SNR at the receiver under subspace uncertainty.
///
/// Returns (SNR_R, Γ_unc) with
/// SNR_R = γ_no-unc · Γ_unc⁻¹, γ_no-unc = G²S_T/(K₀N₀), and
/// Γ_unc⁻¹ = (1 − ρ_T/(1+ρ_T)) / ((1+ρ_R) + inr̄·ε_R/K₀).
pub fn snr_with_uncertainty(p: &ChannelParams, geom: &MismatchGeometry) -> (f64, f64) {
    let rho_t = geom.rho_t();
    let rho_r = geom.rho_r();
    let k0 = geom.k0() as f64;
    let gamma_unc_inv =
        (1.0 - rho_t / (1.0 + rho_t)) / ((1.0 + rho_r) + p.inr_bar * geom.eps_r() as f64 / k0);
    let gamma_no_unc = p.gain * p.gain * p.tx_power / (k0 * p.noise_density);
    (gamma_no_unc * gamma_unc_inv, 1.0 / gamma_unc_inv)
}

/// Ground-truth role of one receiver-sensed dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofLabel {
    /// Belongs to N₀: carries signal plus noise.
    Effective,
    /// Excess dimension hit by external interference.
    InterferedExcess,
    /// Excess dimension carrying noise only.
    CleanExcess,
}

/// One received frame expressed in the receiver's sensed-dimension
/// coordinates, with ground-truth labels for scoring.
#[derive(Debug, Clone)]
pub struct DofObservation {
    pub samples: Vec<Complex64>,
    pub labels: Vec<DofLabel>,
}

impl DofObservation {
    pub fn dims(&self) -> usize {
        self.samples.len()
    }
}

pub(crate) fn complex_gaussian(rng: &mut ChaCha8Rng, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Simulates Q received frames.
///
/// Per frame and receiver dimension ν: the pilot contribution
/// G·√E_p·(b_νᴴ φ_T) on effective dimensions (zero on the excess blocks by
/// orthogonality), circular complex noise of variance N₀ everywhere, and
/// interference of average power inr̄·N₀ on the first ε_R excess
/// dimensions. Deterministic per seed.
pub fn simulate_received(
    geom: &MismatchGeometry,
    p: &ChannelParams,
    q: usize,
    tx_waveform: &Waveform,
    seed: u64,
) -> Vec<DofObservation> {
    assert!(q >= 1, "at least one frame");
    let k0 = geom.k0();
    let k_hat_r = geom.k_hat_r();
    let amplitude = Complex64::new(p.gain * p.pulse_energy().sqrt(), 0.0);
    let coupling: Vec<Complex64> = (0..k_hat_r)
        .map(|nu| {
            let b = geom.rx_basis().column(nu);
            (b.adjoint() * tx_waveform.samples())[(0, 0)] * amplitude
        })
        .collect();
    let labels: Vec<DofLabel> = (0..k_hat_r)
        .map(|nu| {
            if nu < k0 {
                DofLabel::Effective
            } else if nu < k0 + geom.eps_r() {
                DofLabel::InterferedExcess
            } else {
                DofLabel::CleanExcess
            }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..q)
        .map(|_| {
            let samples = (0..k_hat_r)
                .map(|nu| {
                    let mut y = coupling[nu] + complex_gaussian(&mut rng, p.noise_density);
                    if labels[nu] == DofLabel::InterferedExcess && p.inr_bar > 0.0 {
                        y += complex_gaussian(&mut rng, p.inr_bar * p.noise_density);
                    }
                    y
                })
                .collect();
            DofObservation {
                samples,
                labels: labels.clone(),
            }
        })
        .collect()
}

/// Picks the waveform-book entry with the highest spectral coherence.
///
/// Estimates the sample covariance R̂ of the frames (optionally diagonally
/// loaded by `reg`·trace/dim), forms the empirical cross-correlation
/// p̂(ι) = R̂ g_ι with g_ι the book entry in receiver coordinates, and
/// returns the index maximizing p̂(ι)ᴴ R̂⁻¹ p̂(ι).
pub fn detect_waveform(
    frames: &[DofObservation],
    book: &WaveformBook,
    rx_basis: &SubspaceBasis,
    reg: f64,
) -> Result<usize> {
    if frames.is_empty() {
        return Err(Error::BlockLengthMismatch {
            frames: 0,
            expected: 1,
        });
    }
    let dims = frames[0].dims();
    if dims != rx_basis.dim() {
        return Err(Error::DimensionMismatch {
            left: dims,
            right: rx_basis.dim(),
        });
    }
    let q = frames.len() as f64;
    let mut r = nalgebra::DMatrix::<Complex64>::zeros(dims, dims);
    for f in frames {
        let y = ComplexVector::from_vec(f.samples.clone());
        r += &y * y.adjoint();
    }
    r /= Complex64::new(q, 0.0);
    let mut loaded = r.clone();
    if reg > 0.0 {
        let load = reg * r.trace().re / dims as f64;
        for i in 0..dims {
            loaded[(i, i)] += Complex64::new(load, 0.0);
        }
    }
    let chol = nalgebra::Cholesky::new(loaded).ok_or(Error::SingularCovariance)?;
    if reg <= 0.0 {
        // Rounding keeps semi-definite pivots marginally positive, so
        // rank deficiency is caught on the factor diagonal instead.
        let l = chol.l_dirty();
        let mut min_d = f64::INFINITY;
        let mut max_d = 0.0f64;
        for i in 0..dims {
            let d = l[(i, i)].norm();
            min_d = min_d.min(d);
            max_d = max_d.max(d);
        }
        if min_d <= 1e-8 * max_d {
            return Err(Error::SingularCovariance);
        }
    }
    let mut best: Option<(usize, f64)> = None;
    for (idx, w) in book.present() {
        let g = rx_basis.columns().adjoint() * w.samples();
        let p_hat = &r * &g;
        let solved = chol.solve(&p_hat);
        let score = (p_hat.adjoint() * solved)[(0, 0)].re;
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((idx, score));
        }
    }
    best.map(|(idx, _)| idx).ok_or(Error::ZeroProjector)
}
