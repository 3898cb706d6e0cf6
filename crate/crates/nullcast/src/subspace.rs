//! Complex dense subspace geometry: orthonormal bases, orthogonal
//! projectors, SVD null spaces, unitary rotations and subspace distances.
//!
//! Everything here is sized for ambient dimensions up to a few hundred, so
//! dense storage and plain factorizations are the right tool. Bases and
//! projectors are immutable once constructed; all operations are pure.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Dense complex matrix; constructors take entries in row-major order.
pub type ComplexMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type ComplexVector = DVector<Complex64>;

/// Orthonormality tolerance on Bᴴ B − I.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;
/// Relative singular-value threshold separating rank from null space.
pub const RANK_TOL: f64 = 1e-10;

fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// N×k matrix with pairwise-orthonormal columns spanning a subspace of Cᴺ.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    columns: ComplexMatrix,
}

impl SubspaceBasis {
    /// Validates orthonormality (Gram defect below [`ORTHONORMALITY_TOL`],
    /// scaled by √k) and finiteness.
    pub fn new(columns: ComplexMatrix) -> Result<Self> {
        if !all_finite(&columns) {
            return Err(Error::NonFinite);
        }
        let (n, k) = columns.shape();
        if k > n {
            return Err(Error::BadDimensions(format!(
                "{k} columns in ambient dimension {n}"
            )));
        }
        let gram = columns.adjoint() * &columns;
        let defect = (&gram - ComplexMatrix::identity(k, k)).norm();
        if defect > ORTHONORMALITY_TOL * (k.max(1) as f64).sqrt() {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(Self { columns })
    }

    /// Builds from columns known orthonormal by construction (e.g. exact
    /// Fourier or canonical columns). Checked in debug builds only.
    pub(crate) fn from_columns_unchecked(columns: ComplexMatrix) -> Self {
        debug_assert!(Self::new(columns.clone()).is_ok());
        Self { columns }
    }

    /// Empty basis of the zero subspace in Cᴺ.
    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            columns: ComplexMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.columns.nrows()
    }

    /// Subspace dimension k (number of columns).
    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn columns(&self) -> &ComplexMatrix {
        &self.columns
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        self.columns.column(j).into_owned()
    }

    /// Horizontal concatenation; valid only for mutually orthogonal bases,
    /// which the constructor re-checks.
    pub fn concat(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                left: self.ambient_dim(),
                right: other.ambient_dim(),
            });
        }
        let n = self.ambient_dim();
        let k = self.dim() + other.dim();
        let mut m = ComplexMatrix::zeros(n, k);
        m.view_mut((0, 0), (n, self.dim()))
            .copy_from(&self.columns);
        m.view_mut((0, self.dim()), (n, other.dim()))
            .copy_from(&other.columns);
        SubspaceBasis::new(m)
    }

    /// Sub-basis made of the selected columns.
    pub fn select(&self, indices: &[usize]) -> SubspaceBasis {
        let n = self.ambient_dim();
        let mut m = ComplexMatrix::zeros(n, indices.len());
        for (out, &j) in indices.iter().enumerate() {
            m.set_column(out, &self.columns.column(j));
        }
        Self { columns: m }
    }
}

/// N×N Hermitian idempotent matrix projecting onto a subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoProjector {
    matrix: ComplexMatrix,
    rank: usize,
}

impl OrthoProjector {
    /// Accepts an externally supplied matrix after checking the projector
    /// invariants (Hermitian, idempotent, trace equal to an integer rank).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::BadDimensions(format!(
                "projector must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !all_finite(&matrix) {
            return Err(Error::NonFinite);
        }
        let trace = matrix.trace();
        let rank = trace.re.round();
        if rank < 0.0 {
            return Err(Error::BadDimensions("negative trace".into()));
        }
        let p = Self {
            matrix,
            rank: rank as usize,
        };
        p.validate()?;
        Ok(p)
    }

    /// Re-checks the projector invariants at their stated tolerances:
    /// ‖P−Pᴴ‖F < 1e-10, ‖P²−P‖F < 1e-10, |trace(P)−rank| < 1e-8.
    pub fn validate(&self) -> Result<()> {
        let herm = (&self.matrix - self.matrix.adjoint()).norm();
        if herm >= 1e-10 {
            return Err(Error::NotOrthonormal { defect: herm });
        }
        let idem = (&self.matrix * &self.matrix - &self.matrix).norm();
        if idem >= 1e-10 {
            return Err(Error::NotOrthonormal { defect: idem });
        }
        let tr = self.matrix.trace();
        if (tr.re - self.rank as f64).abs() >= 1e-8 || tr.im.abs() >= 1e-8 {
            return Err(Error::NotOrthonormal {
                defect: (tr.re - self.rank as f64).abs(),
            });
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Real parts of the main diagonal (imaginary parts vanish for a
    /// Hermitian matrix).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.ambient_dim())
            .map(|i| self.matrix[(i, i)].re)
            .collect()
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        self.matrix.column(j).into_owned()
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        &self.matrix * v
    }
}

/// Orthonormalizes the columns of a full-column-rank matrix via QR.
///
/// Fails with `RankDeficient` when the smallest singular value drops below
/// [`RANK_TOL`] times the largest.
pub fn orthonormalize(m: &ComplexMatrix) -> Result<SubspaceBasis> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return Err(Error::BadDimensions("empty matrix".into()));
    }
    if !all_finite(m) {
        return Err(Error::NonFinite);
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin <= RANK_TOL * smax {
        return Err(Error::RankDeficient {
            smallest: smin,
            threshold: RANK_TOL * smax,
        });
    }
    let q = m.clone().qr().q();
    SubspaceBasis::new(q)
}

/// P = B Bᴴ, the orthogonal projector onto span(B); rank(P) = dim(B).
pub fn projector_from_basis(b: &SubspaceBasis) -> OrthoProjector {
    let p = b.columns() * b.columns().adjoint();
    OrthoProjector {
        matrix: p,
        rank: b.dim(),
    }
}

/// Right singular vectors of `t` whose singular values fall at or below
/// `rank_tol`·σ_max, i.e. an orthonormal basis of the numerical null space.
///
/// Wide matrices are padded with zero rows to square so the factorization
/// returns the full right singular space; the padding changes neither the
/// singular values nor the right singular vectors.
pub fn svd_null_space(t: &ComplexMatrix, rank_tol: f64) -> Result<SubspaceBasis> {
    if t.ncols() == 0 {
        return Err(Error::BadDimensions("matrix with no columns".into()));
    }
    if !all_finite(t) {
        return Err(Error::NonFinite);
    }
    let (rows, cols_n) = t.shape();
    let work = if rows < cols_n {
        let mut padded = ComplexMatrix::zeros(cols_n, cols_n);
        padded.view_mut((0, 0), (rows, cols_n)).copy_from(t);
        padded
    } else {
        t.clone()
    };
    let svd = work.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().cloned().fold(0.0f64, f64::max);
    let keep: Vec<usize> = (0..sigma.len())
        .filter(|&i| sigma[i] <= rank_tol * smax)
        .collect();
    if keep.is_empty() {
        return Err(Error::EmptyNullSpace {
            tolerance: rank_tol,
        });
    }
    let v = v_t.adjoint();
    let mut out = ComplexMatrix::zeros(cols_n, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &v.column(i));
    }
    SubspaceBasis::new(out)
}

/// Rotates a basis inside its own subspace: B ↦ B U with U unitary k×k.
/// The spanned subspace, and therefore the projector, are unchanged.
pub fn rotate_basis(b: &SubspaceBasis, u: &ComplexMatrix) -> Result<SubspaceBasis> {
    let k = b.dim();
    if u.nrows() != k || u.ncols() != k {
        return Err(Error::DimensionMismatch {
            left: k,
            right: u.nrows(),
        });
    }
    let defect = (u.adjoint() * u - ComplexMatrix::identity(k, k)).norm();
    if defect > 1e-10 * (k.max(1) as f64).sqrt() {
        return Err(Error::NotUnitary { defect });
    }
    SubspaceBasis::new(b.columns() * u)
}

/// Deterministic Haar-like unitary: QR of a seeded complex Gaussian matrix
/// with the R diagonal phases absorbed into Q.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    assert!(dim >= 1, "unitary dimension must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_gaussian_matrix(dim, dim, &mut rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / Complex64::new(d.norm(), 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

/// Matrix of iid standard complex Gaussian entries (unit variance per
/// complex entry).
pub(crate) fn random_gaussian_matrix(
    rows: usize,
    cols: usize,
    rng: &mut ChaCha8Rng,
) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    })
}

/// Squared chordal distance d² = ½‖P₁−P₂‖²F between the projected
/// subspaces; zero iff the projectors agree.
pub fn chordal_distance(p1: &OrthoProjector, p2: &OrthoProjector) -> Result<f64> {
    if p1.ambient_dim() != p2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: p1.ambient_dim(),
            right: p2.ambient_dim(),
        });
    }
    let d = p1.matrix() - p2.matrix();
    Ok(0.5 * d.norm_squared())
}

/// Canonical unit vector eₙ of Cᴺ (zero-based index).
pub fn canonical_vector(n: usize, index: usize) -> ComplexVector {
    let mut e = ComplexVector::zeros(n);
    e[index] = Complex64::new(1.0, 0.0);
    e
}

/// Unit-norm Fourier column f_k\[n\] = e^{j2πkn/N}/√N.
pub fn fourier_column(n: usize, k: usize) -> ComplexVector {
    let scale = 1.0 / (n as f64).sqrt();
    ComplexVector::from_fn(n, |row, _| {
        let phase = 2.0 * std::f64::consts::PI * (k as f64) * (row as f64) / (n as f64);
        Complex64::from_polar(scale, phase)
    })
}
