//! Dense complex matrix kernel.
//!
//! Every operator in the crate (propagators, Hamiltonians, density operators)
//! is a small dense [`ComplexMatrix`]. Storage and the Hermitian eigensolver
//! come from `nalgebra`; everything else here is thin and explicit.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
pub use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Max entrywise |m - m†| accepted by [`hermitian_eig`] and friends.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Default soft cap on matrix dimension, overridable through `HOLONOMY_MAX_DIM`.
pub const DEFAULT_MAX_DIM: usize = 64;

/// Dimension cap applied when matrices are built from external data.
pub fn max_dim() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("HOLONOMY_MAX_DIM")
            .ok()
            .and_then(|v| v.parse().ok())
            .filter(|&n: &usize| n > 0)
            .unwrap_or(DEFAULT_MAX_DIM)
    })
}

pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Principal argument in (−π, π] with the negative real axis mapped to +π.
///
/// Values within a relative 1e−12 of the negative real axis are snapped to +π,
/// so round-off in the imaginary part cannot flip the branch.
pub fn principal_arg(z: C64) -> f64 {
    if z.re < 0.0 && z.im.abs() <= 1e-12 * z.re.abs() {
        std::f64::consts::PI
    } else {
        z.im.atan2(z.re)
    }
}

/// Square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Build from row-major entries; `entries.len()` must be `dim * dim`.
    pub fn from_vec(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed("dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Malformed(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        check_cap(dim)?;
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, &entries)))
    }

    /// Build from a list of rows. Rows must all have the same length as the list.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(Error::Malformed(format!(
                "row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
        Self::from_vec(dim, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                diag[i]
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self(DMatrix::from_row_slice(2, 2, &[o, l, l, o]))
    }

    pub fn pauli_y() -> Self {
        let o = C64::new(0.0, 0.0);
        Self(DMatrix::from_row_slice(2, 2, &[o, -I, I, o]))
    }

    pub fn pauli_z() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self(DMatrix::from_row_slice(2, 2, &[l, o, o, -l]))
    }

    /// Projector |v⟩⟨v|.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    /// Tr[self · other] without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim(), "trace_product dimension mismatch");
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.0[(i, k)] * other.0[(k, i)];
            }
        }
        acc
    }

    /// Max entrywise |m - m†|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation > tol {
            Err(Error::NotHermitian { deviation })
        } else {
            Ok(())
        }
    }

    /// ‖U†U − I‖_F.
    pub fn unitarity_defect(&self) -> f64 {
        (&(&self.adjoint() * self) - &Self::identity(self.dim())).frobenius_norm()
    }

    /// (m + m†)/2.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()).map(|z| z * 0.5))
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim(), v.len(), "mul_vec dimension mismatch");
        (0..self.dim())
            .map(|i| (0..v.len()).map(|k| self.0[(i, k)] * v[k]).sum())
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

fn check_cap(dim: usize) -> Result<()> {
    let cap = max_dim();
    if dim > cap {
        Err(Error::DimensionTooLarge { dim, cap })
    } else {
        Ok(())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Spectral decomposition `m = V diag(values) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    /// V diag(f(λ_k)) V†.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = &self.vectors.0;
        let n = v.nrows();
        let mut scaled = v.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let fk = f(lam);
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= fk);
        }
        debug_assert_eq!(scaled.ncols(), n);
        ComplexMatrix(scaled * v.adjoint())
    }

    /// exp(i s m) from the stored decomposition.
    pub fn exp_i(&self, s: f64) -> ComplexMatrix {
        self.map_spectrum(|lam| C64::from_polar(1.0, s * lam))
    }
}

/// Eigendecomposition of a Hermitian matrix with ascending eigenvalues.
///
/// Ties keep the order produced by the underlying solver, which is unspecified.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    m.ensure_hermitian(HERMITIAN_TOL)?;
    Ok(hermitian_eig_unchecked(m))
}

pub(crate) fn hermitian_eig_unchecked(m: &ComplexMatrix) -> HermitianEig {
    let eig = SymmetricEigen::new(m.hermitian_part().0);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = m.dim();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEig {
        values,
        vectors: ComplexMatrix(vectors),
    }
}

/// exp(i s h) for Hermitian `h`, unitary by construction.
pub fn expm_hermitian_generator(h: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(h)?.exp_i(s))
}

/// Kronecker product with `(a ⊗ b)[i·n_b + k, j·n_b + l] = a[i,j] · b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Which factor of a bipartite space survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Trace out one factor of an `(dim_a · dim_b)`-dimensional operator.
pub fn partial_trace(
    m: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    if dim_a == 0 || dim_b == 0 || m.dim() != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            expected: dim_a * dim_b,
            found: m.dim(),
        });
    }
    let at = |i: usize, k: usize, j: usize, l: usize| m.0[(i * dim_b + k, j * dim_b + l)];
    Ok(match keep {
        Subsystem::B => {
            ComplexMatrix::from_fn(dim_b, |k, l| (0..dim_a).map(|i| at(i, k, i, l)).sum())
        }
        Subsystem::A => {
            ComplexMatrix::from_fn(dim_a, |i, j| (0..dim_b).map(|k| at(i, k, j, k)).sum())
        }
    })
}

/// ‖ab − ba‖_F.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok((&(a * b) - &(b * a)).frobenius_norm())
}
