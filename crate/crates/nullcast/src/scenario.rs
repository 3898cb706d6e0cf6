//! Ground-truth signal/noise partitions and the sensed, error-corrupted
//! bases an opportunistic node works with.
//!
//! The ambient space Cᴺ splits into a D-dimensional signal subspace
//! (occupied DoF) and its K = N−D complement (available DoF). Local sensing
//! misclassifies some columns: ε+δ occupied DoF are sensed available (their
//! columns Ξ move into the sensed noise basis) and `false_alarms` available
//! DoF are sensed occupied (columns Υ move into the sensed signal basis).
//! Dimension bookkeeping follows
//!
//!   D̂ = D − ε − δ + (K − K̃),    K̂ = K̃ + ε + δ,
//!
//! with K̃ = K − false_alarms. Column selection is uniform without
//! replacement from a seeded generator, so every environment replays
//! exactly from (parameters, seed).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::subspace::{
    canonical_vector, fourier_column, orthonormalize, random_gaussian_matrix, ComplexMatrix,
    SubspaceBasis,
};

/// Which orthonormal family the DoF columns come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Unit-norm DFT columns; DoF are carriers.
    Fourier,
    /// Canonical unit vectors; DoF are time/sample slots.
    Canonical,
    /// Columns of a seeded Haar-like random orthonormal matrix.
    RandomOrthonormal,
}

impl BasisKind {
    fn family(self, n: usize, seed: u64) -> Vec<crate::subspace::ComplexVector> {
        match self {
            BasisKind::Fourier => (0..n).map(|k| fourier_column(n, k)).collect(),
            BasisKind::Canonical => (0..n).map(|k| canonical_vector(n, k)).collect(),
            BasisKind::RandomOrthonormal => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
                let b = orthonormalize(&random_gaussian_matrix(n, n, &mut rng))
                    .expect("random Gaussian matrix is full rank almost surely");
                (0..n).map(|k| b.column(k)).collect()
            }
        }
    }
}

/// Sensing-uncertainty counts at one node.
///
/// `eps` and `delta` both describe occupied DoF sensed available — `eps`
/// from sensing errors (these carry interference), `delta` from poor
/// monitoring — and enter the sensed dimensions identically. `false_alarms`
/// counts available DoF sensed occupied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UncertaintySpec {
    pub eps: usize,
    pub delta: usize,
    pub false_alarms: usize,
}

impl UncertaintySpec {
    pub const NONE: UncertaintySpec = UncertaintySpec {
        eps: 0,
        delta: 0,
        false_alarms: 0,
    };

    /// ξ = ε + δ, the dimension of the misclassified-occupied block Ξ.
    pub fn xi(&self) -> usize {
        self.eps + self.delta
    }
}

/// One node's view of the environment: the ground-truth partition blocks
/// and the sensed bases composed from them.
#[derive(Debug, Clone)]
pub struct SensedEnvironment {
    n: usize,
    kind: BasisKind,
    spec: UncertaintySpec,
    /// Occupied DoF correctly sensed occupied (Ψ̃_S).
    tilde_signal: SubspaceBasis,
    /// Occupied DoF erroneously sensed available (Ξ).
    xi: SubspaceBasis,
    /// Available DoF correctly sensed available (Ψ̃_N).
    tilde_noise: SubspaceBasis,
    /// Available DoF erroneously sensed occupied (Υ).
    upsilon: SubspaceBasis,
    sensed_signal: SubspaceBasis,
    sensed_noise: SubspaceBasis,
}

impl SensedEnvironment {
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn basis_kind(&self) -> BasisKind {
        self.kind
    }

    pub fn uncertainty(&self) -> UncertaintySpec {
        self.spec
    }

    /// True occupied dimension D.
    pub fn d(&self) -> usize {
        self.tilde_signal.dim() + self.xi.dim()
    }

    /// True available dimension K = N − D.
    pub fn k(&self) -> usize {
        self.tilde_noise.dim() + self.upsilon.dim()
    }

    /// Sensed occupied dimension D̂ = D − ε − δ + (K − K̃).
    pub fn d_hat(&self) -> usize {
        self.sensed_signal.dim()
    }

    /// Sensed available dimension K̂ = K̃ + ε + δ.
    pub fn k_hat(&self) -> usize {
        self.sensed_noise.dim()
    }

    /// K̃, the available DoF sensed available.
    pub fn k_tilde(&self) -> usize {
        self.tilde_noise.dim()
    }

    /// Ground-truth signal basis [Ψ̃_S ⋮ Ξ].
    pub fn true_signal_basis(&self) -> Result<SubspaceBasis> {
        self.tilde_signal.concat(&self.xi)
    }

    /// Ground-truth noise basis [Ψ̃_N ⋮ Υ].
    pub fn true_noise_basis(&self) -> Result<SubspaceBasis> {
        self.tilde_noise.concat(&self.upsilon)
    }

    /// Sensed signal basis Ψ̂_S = [Ψ̃_S ⋮ Υ].
    pub fn sensed_signal_basis(&self) -> &SubspaceBasis {
        &self.sensed_signal
    }

    /// Sensed noise basis Ψ̂_N = [Ψ̃_N ⋮ Ξ].
    pub fn sensed_noise_basis(&self) -> &SubspaceBasis {
        &self.sensed_noise
    }

    /// The misclassified-occupied block Ξ (receives leaked interference).
    pub fn xi_basis(&self) -> &SubspaceBasis {
        &self.xi
    }

    /// The misclassified-available block Υ.
    pub fn upsilon_basis(&self) -> &SubspaceBasis {
        &self.upsilon
    }
}

/// Draws the ground-truth partition: D occupied columns chosen without
/// replacement from the family, the remaining K = N−D spanning the noise
/// subspace. Returns (signal, noise).
pub fn generate_environment(
    n: usize,
    d: usize,
    kind: BasisKind,
    seed: u64,
) -> Result<(SubspaceBasis, SubspaceBasis)> {
    if d > n || n == 0 {
        return Err(Error::BadDimensions(format!(
            "D = {d} occupied DoF in ambient dimension {n}"
        )));
    }
    let family = kind.family(n, seed);
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);
    let occupied = &indices[..d];
    let available = &indices[d..];
    let pick = |idx: &[usize]| -> SubspaceBasis {
        let cols: Vec<_> = idx.iter().map(|&i| family[i].clone()).collect();
        if cols.is_empty() {
            SubspaceBasis::empty(n)
        } else {
            SubspaceBasis::from_columns_unchecked(ComplexMatrix::from_columns(&cols))
        }
    };
    Ok((pick(occupied), pick(available)))
}

/// Applies the local sensing-uncertainty model: moves ε+δ seeded-random
/// signal columns into the sensed noise basis (as Ξ) and `false_alarms`
/// noise columns into the sensed signal basis (as Υ). Columns keep their
/// identity; only the labeling changes.
pub fn apply_sensing_uncertainty(
    signal: &SubspaceBasis,
    noise: &SubspaceBasis,
    spec: UncertaintySpec,
    seed: u64,
    kind: BasisKind,
) -> Result<SensedEnvironment> {
    let n = signal.ambient_dim();
    if noise.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: noise.ambient_dim(),
        });
    }
    let d = signal.dim();
    let k = noise.dim();
    if d + k != n {
        return Err(Error::SpecInfeasible(format!(
            "partition {d}+{k} does not cover dimension {n}"
        )));
    }
    if spec.xi() > d {
        return Err(Error::SpecInfeasible(format!(
            "eps+delta = {} exceeds D = {d}",
            spec.xi()
        )));
    }
    if spec.false_alarms > k {
        return Err(Error::SpecInfeasible(format!(
            "false_alarms = {} exceeds K = {k}",
            spec.false_alarms
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sig_idx: Vec<usize> = (0..d).collect();
    sig_idx.shuffle(&mut rng);
    let (xi_idx, tilde_sig_idx) = sig_idx.split_at(spec.xi());
    let mut noise_idx: Vec<usize> = (0..k).collect();
    noise_idx.shuffle(&mut rng);
    let (ups_idx, tilde_noise_idx) = noise_idx.split_at(spec.false_alarms);

    let tilde_signal = signal.select(tilde_sig_idx);
    let xi = signal.select(xi_idx);
    let tilde_noise = noise.select(tilde_noise_idx);
    let upsilon = noise.select(ups_idx);

    let sensed_signal = tilde_signal.concat(&upsilon)?;
    let sensed_noise = tilde_noise.concat(&xi)?;

    Ok(SensedEnvironment {
        n,
        kind,
        spec,
        tilde_signal,
        xi,
        tilde_noise,
        upsilon,
        sensed_signal,
        sensed_noise,
    })
}

/// Convenience composition: ground truth plus sensing uncertainty in one
/// call, both driven by the same seed.
pub fn build(
    n: usize,
    d: usize,
    kind: BasisKind,
    spec: UncertaintySpec,
    seed: u64,
) -> Result<SensedEnvironment> {
    let (signal, noise) = generate_environment(n, d, kind, seed)?;
    apply_sensing_uncertainty(&signal, &noise, spec, seed.wrapping_add(1), kind)
}
