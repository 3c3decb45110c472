//! Dense complex matrices: tensor products, partial traces, spectra, norms
//! and entropies.
//!
//! Matrices are plain [`nalgebra::DMatrix`] values over [`Complex64`]. Every
//! predicate that compares floating-point quantities takes an explicit
//! tolerance; the defaults live in [`Tolerance`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{dim_mismatch, Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Equality and integer-rounding thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Used for Hermiticity, unitarity, PSD and equality checks.
    pub eq: f64,
    /// Maximum distance from an integer before a multiplicity is rejected.
    pub round: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eq: 1e-9, round: 1e-6 }
    }
}

impl Tolerance {
    pub fn with_eq(eq: f64) -> Self {
        Self { eq, ..Self::default() }
    }
}

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// `|i><j|` in dimension `n`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(i, j)] = c64(1.0, 0.0);
    m
}

pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| c64(x, 0.0)))
}

pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Which factor of a bipartite space survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace of an operator on `C^{d_a} ⊗ C^{d_b}`, keeping one factor.
pub fn partial_trace(
    x: &ComplexMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    let n = da * db;
    if x.nrows() != n || x.ncols() != n {
        return Err(dim_mismatch(
            "partial_trace",
            format!("{n}x{n}"),
            format!("{}x{}", x.nrows(), x.ncols()),
        ));
    }
    let out = match keep {
        Subsystem::First => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| x[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::Second => ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| x[(k * db + i, k * db + j)]).sum()
        }),
    };
    Ok(out)
}

/// `|Ω> = d^{-1/2} Σ_i |i>⊗|i>`.
pub fn maximally_entangled_vector(d: usize) -> ComplexVector {
    let amp = c64(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = ComplexVector::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    v
}

pub fn maximally_entangled_state(d: usize) -> ComplexMatrix {
    let v = maximally_entangled_vector(d);
    &v * v.adjoint()
}

/// The swap operator on `C^d ⊗ C^d`.
pub fn flip(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = c64(1.0, 0.0);
        }
    }
    f
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn hermitian_part(x: &ComplexMatrix) -> ComplexMatrix {
    (x + x.adjoint()) * c64(0.5, 0.0)
}

/// Largest entry-wise modulus.
pub fn max_abs(x: &ComplexMatrix) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_hermitian(x: &ComplexMatrix, tol: f64) -> bool {
    x.is_square() && max_abs(&(x - x.adjoint())) <= tol
}

pub fn is_unitary(x: &ComplexMatrix, tol: f64) -> bool {
    x.is_square() && max_abs(&(x * x.adjoint() - identity(x.nrows()))) <= tol
}

/// Eigen-decomposition of the Hermitian part of `x`, eigenvalues ascending.
pub fn eigh(x: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(x));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(x.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

pub fn eigenvalues_hermitian(x: &ComplexMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(hermitian_part(x))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eigenvalue(x: &ComplexMatrix) -> f64 {
    eigenvalues_hermitian(x).first().copied().unwrap_or(0.0)
}

pub fn is_psd(x: &ComplexMatrix, tol: f64) -> bool {
    is_hermitian(x, tol) && min_eigenvalue(x) >= -tol
}

pub fn singular_values(x: &ComplexMatrix) -> Vec<f64> {
    x.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Sum of singular values.
pub fn trace_norm(x: &ComplexMatrix) -> f64 {
    if x.is_square() && is_hermitian(x, 1e-14 * (1.0 + max_abs(x))) {
        eigenvalues_hermitian(x).iter().map(|l| l.abs()).sum()
    } else {
        singular_values(x).iter().sum()
    }
}

pub fn frobenius_norm(x: &ComplexMatrix) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Numerical rank: singular values above `tol` times the largest one.
pub fn rank(x: &ComplexMatrix, tol: f64) -> usize {
    let sv = singular_values(x);
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top).count()
}

/// Square root of a PSD matrix (negative eigenvalues clamped to zero).
pub fn sqrt_psd(x: &ComplexMatrix) -> ComplexMatrix {
    let (vals, vecs) = eigh(x);
    let d = ComplexVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| c64(l.max(0.0).sqrt(), 0.0)),
    );
    &vecs * ComplexMatrix::from_diagonal(&d) * vecs.adjoint()
}

/// Shannon entropy (bits) of a spectrum, clamping values in `[-tol, 0)`.
pub fn entropy_of_spectrum(eigs: &[f64], tol: f64) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigs {
        if l < -tol {
            return Err(Error::NegativeEigenvalue { value: l });
        }
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    Ok(s.max(0.0))
}

/// A validated quantum state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidState(format!(
                "not square ({}x{})",
                m.nrows(),
                m.ncols()
            )));
        }
        if !is_hermitian(&m, tol) {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr - c64(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = min_eigenvalue(&m);
        if min < -tol {
            return Err(Error::NegativeEigenvalue { value: min });
        }
        Ok(Self(hermitian_part(&m)))
    }

    /// Wraps without validation; callers guarantee the state properties.
    pub fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn pure(psi: &ComplexVector) -> Self {
        let n = psi.norm();
        let v = psi / c64(n, 0.0);
        Self(&v * v.adjoint())
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(identity(d) * c64(1.0 / d as f64, 0.0))
    }

    /// Normalized Wishart sample `G G* / tr(G G*)` with standard complex
    /// Gaussian entries.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let g = ginibre(d, d, rng);
        let w = &g * g.adjoint();
        let tr = w.trace().re;
        Self(hermitian_part(&(w / c64(tr, 0.0))))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace_distance(&self, other: &Self) -> f64 {
        0.5 * trace_norm(&(&self.0 - &other.0))
    }
}

/// `n` Wishart samples drawn from `ChaCha8Rng::seed_from_u64(seed)`.
pub fn random_states(d: usize, n: usize, seed: u64) -> Vec<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| DensityMatrix::random(d, &mut rng)).collect()
}

/// `n` Haar unitaries drawn from `ChaCha8Rng::seed_from_u64(seed)`.
pub fn random_unitaries(d: usize, n: usize, seed: u64) -> Vec<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_unitary(d, &mut rng)).collect()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix, tol: f64) -> Result<f64> {
    entropy_of_spectrum(&eigenvalues_hermitian(rho.matrix()), tol)
}

/// Row-major `[re, im]` pairs, the matrix format used in JSON documents.
pub fn to_pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    m.transpose().iter().map(|z| [z.re, z.im]).collect()
}

pub fn from_pairs(rows: usize, cols: usize, pairs: &[[f64; 2]]) -> Result<ComplexMatrix> {
    if pairs.len() != rows * cols {
        return Err(dim_mismatch("from_pairs", rows * cols, pairs.len()));
    }
    Ok(ComplexMatrix::from_row_iterator(
        rows,
        cols,
        pairs.iter().map(|&[re, im]| c64(re, im)),
    ))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im)
    })
}

/// Haar-random unitary (QR of a Ginibre matrix with phase correction).
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(d, d, rng).qr();
    let q = qr.q();
    let r = qr.r();
    let phases = ComplexVector::from_iterator(
        d,
        (0..d).map(|i| {
            let z = r[(i, i)];
            if z.norm() > 0.0 {
                z / z.norm()
            } else {
                c64(1.0, 0.0)
            }
        }),
    );
    q * ComplexMatrix::from_diagonal(&phases)
}

/// Haar-random unitary rescaled to unit determinant.
pub fn random_special_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let u = random_unitary(d, rng);
    let det = u.determinant();
    let phase = Complex64::from_polar(1.0, -det.arg() / d as f64);
    u * phase
}

pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    hermitian_part(&ginibre(d, d, rng))
}
