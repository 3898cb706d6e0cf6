//! Invariant shaping-waveform design on the sensed noise subspace.
//!
//! The designed waveform is a normalized column of the orthogonal projector
//! P̂ onto the sensed noise subspace:
//!
//!   φ̂ₙ = (eₙᴴ P̂ eₙ)^{-1/2} P̂ eₙ,
//!
//! with n the index of the largest diagonal entry of P̂. The same vector
//! falls out of a total-least-squares formulation: stack the sensed signal
//! basis into the extended data matrix T = [0 ⋮ Ψ̂_Sᴴ], take the SVD null
//! space V₂ of TᴴT, partition off one row as the pinned coefficient and
//! normalize the minimum-norm combination. [`design_tls`] follows that
//! route step by step and agrees with [`design_waveform`] to rounding
//! error, which the tests pin down.
//!
//! Because the design depends on the subspace only through its projector,
//! it is invariant to rotations of the sensed basis and to diagonal
//! phase/frequency offsets; the diagonal of Γ P̂ Γᴴ equals that of P̂ for
//! unitary diagonal Γ, so even the column selection is unaffected.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::subspace::{svd_null_space, ComplexMatrix, ComplexVector, OrthoProjector, SubspaceBasis, RANK_TOL};

/// Default tolerance for calling two diagonal entries tied.
pub const TIE_TOL: f64 = 1e-9;
/// Diagonal entries at or below this count as absent columns.
pub const DEGENERATE_DIAG: f64 = 1e-12;

/// Unit-energy shaping waveform with its selection bookkeeping.
///
/// `tie_set` lists every column whose diagonal entry ties the maximum
/// within the tie tolerance; `unique` is true when the set is a singleton.
#[derive(Debug, Clone)]
pub struct Waveform {
    samples: ComplexVector,
    column_index: usize,
    unique: bool,
    tie_set: Vec<usize>,
}

impl Waveform {
    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &ComplexVector {
        &self.samples
    }

    pub fn column_index(&self) -> usize {
        self.column_index
    }

    pub fn unique(&self) -> bool {
        self.unique
    }

    pub fn tie_set(&self) -> &[usize] {
        &self.tie_set
    }

    pub fn energy(&self) -> f64 {
        self.samples.norm_squared()
    }
}

/// The N waveforms obtained by normalizing every projector column;
/// columns with a numerically zero diagonal are absent.
#[derive(Debug, Clone)]
pub struct WaveformBook {
    entries: Vec<Option<Waveform>>,
}

impl WaveformBook {
    /// Assembles a book from already-designed entries (e.g. a sub-book).
    pub fn from_entries(entries: Vec<Option<Waveform>>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, n: usize) -> Option<&Waveform> {
        self.entries[n].as_ref()
    }

    pub fn entries(&self) -> &[Option<Waveform>] {
        &self.entries
    }

    pub fn present(&self) -> impl Iterator<Item = (usize, &Waveform)> {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.as_ref().map(|w| (i, w)))
    }
}

/// Argmax over the projector diagonal with tie reporting.
///
/// Returns the lowest tied index and the full tie set (every k with
/// p_k ≥ p_max − tie_tol).
pub fn select_column(p: &OrthoProjector, tie_tol: f64) -> Result<(usize, Vec<usize>)> {
    if p.rank() == 0 {
        return Err(Error::ZeroProjector);
    }
    let diag = p.diagonal();
    select_from_diagonal(&diag, tie_tol)
}

fn select_from_diagonal(diag: &[f64], tie_tol: f64) -> Result<(usize, Vec<usize>)> {
    let p_max = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if p_max.is_nan() || p_max <= DEGENERATE_DIAG {
        return Err(Error::ZeroProjector);
    }
    let tie_set: Vec<usize> = (0..diag.len())
        .filter(|&k| diag[k] >= p_max - tie_tol)
        .collect();
    Ok((tie_set[0], tie_set))
}

/// Normalized n-th projector column, (eₙᴴ P eₙ)^{-1/2} P eₙ.
///
/// The normalization makes the n-th sample real positive, which pins the
/// unimodular phase ambiguity and keeps the TLS comparison exact.
pub fn design_waveform(p: &OrthoProjector, n: usize) -> Result<Waveform> {
    let diag = p.diagonal();
    let p_nn = diag[n];
    if p_nn <= DEGENERATE_DIAG {
        return Err(Error::DegenerateColumn {
            index: n,
            diagonal: p_nn,
        });
    }
    let samples = p.column(n) / Complex64::new(p_nn.sqrt(), 0.0);
    let (_, tie_set) = select_from_diagonal(&diag, TIE_TOL)?;
    Ok(Waveform {
        samples,
        column_index: n,
        unique: tie_set.len() == 1,
        tie_set,
    })
}

/// Total-least-squares route to the same waveform.
///
/// Builds the extended data matrix T = [0 ⋮ Ψ̂_Sᴴ], extracts the null-space
/// basis V₂ of TᴴT, reads the candidate diagnostics off the rows of V₂
/// (the squared row norms reproduce the projector diagonal), pins the
/// winning coefficient and returns the minimum-norm combination normalized
/// to unit energy.
pub fn design_tls(sensed_signal: &SubspaceBasis) -> Result<Waveform> {
    let n = sensed_signal.ambient_dim();
    let d_hat = sensed_signal.dim();

    let v2 = if d_hat == 0 {
        // No sensed-occupied directions: the null space is everything.
        SubspaceBasis::new(ComplexMatrix::identity(n + 1, n + 1))?
    } else {
        let mut t = ComplexMatrix::zeros(d_hat, n + 1);
        t.view_mut((0, 1), (d_hat, n))
            .copy_from(&sensed_signal.columns().adjoint());
        svd_null_space(&t, RANK_TOL)?
    };

    // Row k+1 of V₂ is the pinned-coefficient vector for candidate column k;
    // its squared norm equals the k-th diagonal entry of the noise projector.
    let m = v2.dim();
    let rows = v2.columns(); // (n+1) × m
    let mut diag = vec![0.0f64; n];
    for k in 0..n {
        let mut acc = 0.0;
        for j in 0..m {
            acc += rows[(k + 1, j)].norm_sqr();
        }
        diag[k] = acc;
    }
    let (winner, tie_set) = select_from_diagonal(&diag, TIE_TOL).map_err(|_| {
        // Every candidate row vanished: the sensed signal basis fills Cᴺ.
        Error::EmptyNullSpace { tolerance: RANK_TOL }
    })?;

    // Minimum-norm combination with the winner's coefficient pinned:
    // V₂ c* restricted to the last N coordinates, then unit-normalized.
    let c: Vec<Complex64> = (0..m).map(|j| rows[(winner + 1, j)]).collect();
    let mut phi = ComplexVector::zeros(n);
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..m {
            acc += rows[(k + 1, j)] * c[j].conj();
        }
        phi[k] = acc;
    }
    let norm = phi.norm();
    if norm <= DEGENERATE_DIAG {
        return Err(Error::EmptyNullSpace { tolerance: RANK_TOL });
    }
    let samples = phi / Complex64::new(norm, 0.0);
    Ok(Waveform {
        samples,
        column_index: winner,
        unique: tie_set.len() == 1,
        tie_set,
    })
}

/// All N normalized projector columns; entries with a numerically zero
/// diagonal are marked absent instead of failing.
pub fn waveform_book(p: &OrthoProjector) -> WaveformBook {
    let n = p.ambient_dim();
    let entries = (0..n)
        .map(|k| design_waveform(p, k).ok())
        .collect();
    WaveformBook { entries }
}

/// Waveform that concentrates on a single sensed DoF: the selected column
/// of the basis itself.
///
/// When every diagonal entry of the projector ties (complete selection
/// ambiguity, e.g. a full-space sensed noise subspace), the book is only
/// defined relative to a coordinate choice. Expressing the book in the
/// coordinates indexed by the sensed DoF turns entry n into the n-th basis
/// column; a uniformly drawn entry then exploits every DoF equally on
/// average.
pub fn basis_waveform(basis: &SubspaceBasis, n: usize) -> Waveform {
    let tie_set: Vec<usize> = (0..basis.dim()).collect();
    Waveform {
        samples: basis.column(n),
        column_index: n,
        unique: basis.dim() == 1,
        tie_set,
    }
}

/// Power spectral density of the zero-padded waveform, in dB normalized to
/// a 0 dB peak. Exact spectral zeros are floored at −400 dB to keep the
/// output finite.
pub fn psd(w: &Waveform, n_fft: usize) -> Result<Vec<f64>> {
    if n_fft < w.n() {
        return Err(Error::BadFftSize { n_fft, n: w.n() });
    }
    let mut buf: Vec<Complex64> = w.samples().iter().cloned().collect();
    buf.resize(n_fft, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);
    let power: Vec<f64> = buf.iter().map(|z| z.norm_sqr()).collect();
    let peak = power.iter().cloned().fold(0.0f64, f64::max);
    if peak <= 0.0 {
        return Err(Error::DegeneratePolynomial);
    }
    Ok(power
        .iter()
        .map(|&v| (10.0 * (v / peak).log10()).max(-400.0))
        .collect())
}

/// Zeros of the waveform's Z-transform Φ(z) = Σ φ\[m\] z^{-m}.
///
/// Trailing samples below 1e-12 are stripped first, so a pure impulse has
/// no zeros; the count equals the effective degree. A waveform spanning k
/// Fourier carriers places zeros on the unit circle exactly at the
/// complementary carrier positions, with the remaining extraneous zeros
/// inside the circle.
pub fn zeros(w: &Waveform) -> Result<Vec<Complex64>> {
    let samples: Vec<Complex64> = w.samples().iter().cloned().collect();
    let mut last = None;
    for (i, s) in samples.iter().enumerate() {
        if s.norm() >= 1e-12 {
            last = Some(i);
        }
    }
    let Some(last) = last else {
        return Err(Error::DegeneratePolynomial);
    };
    // Φ(z)·z^L = Σ φ[m] z^{L−m}: ascending coefficients are the reversed
    // samples.
    let coeffs: Vec<Complex64> = (0..=last).map(|k| samples[last - k]).collect();
    crate::poly::roots(&coeffs)
}
