//! Density operators, spectral decompositions and qubit Bloch vectors.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matcore::{hermitian_eig_unchecked, ComplexMatrix, C64};
use crate::{Error, Result};

/// Tolerance on Hermiticity, unit trace and negative eigenvalues of a density operator.
pub const DENSITY_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (max deviation {dev:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eig_unchecked(&matrix).values[0];
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(Self { matrix })
    }

    /// Caller guarantees the invariants, e.g. after unitary conjugation of a valid state.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// |ψ⟩⟨ψ| for a unit vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Self::new(ComplexMatrix::outer(psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_matrix_unchecked(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// U ρ U†.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::from_matrix_unchecked(&(u * &self.matrix) * &u.adjoint())
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }
}

/// ρ = Σ w_k |k⟩⟨k|.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Ascending, non-negative, summing to one.
    pub weights: Vec<f64>,
    /// Orthonormal eigenvectors matching `weights`.
    pub basis: Vec<Vec<C64>>,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.basis.first().map_or(0, Vec::len);
        self.weights
            .iter()
            .zip(&self.basis)
            .fold(ComplexMatrix::zeros(dim), |acc, (w, v)| {
                &acc + &ComplexMatrix::outer(v).scale_real(*w)
            })
    }
}

/// Qubit Bloch vector (Tr ρσ_x, Tr ρσ_y, Tr ρσ_z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn x(&self) -> f64 {
        self.0[0]
    }
    pub fn y(&self) -> f64 {
        self.0[1]
    }
    pub fn z(&self) -> f64 {
        self.0[2]
    }
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
    pub fn distance(&self, other: &Self) -> f64 {
        (0..3)
            .map(|i| (self.0[i] - other.0[i]).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// ½[I + r(sinθ cosφ σ_x + sinθ sinφ σ_y + cosθ σ_z)].
pub fn qubit_state(r: f64, theta: f64, phi: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidPurity(r));
    }
    let (x, y, z) = (
        r * theta.sin() * phi.cos(),
        r * theta.sin() * phi.sin(),
        r * theta.cos(),
    );
    let m = ComplexMatrix::from_rows(&[
        vec![C64::new(0.5 * (1.0 + z), 0.0), C64::new(0.5 * x, -0.5 * y)],
        vec![C64::new(0.5 * x, 0.5 * y), C64::new(0.5 * (1.0 - z), 0.0)],
    ])?;
    Ok(DensityOperator::from_matrix_unchecked(m))
}

/// Eigen-decomposition with eigenvalues in [−1e−10, 0) clamped to zero and
/// the weights renormalised. Degenerate subspaces get an arbitrary orthonormal basis.
pub fn spectral_decompose(rho: &DensityOperator) -> SpectralDecomposition {
    let eig = hermitian_eig_unchecked(rho.matrix());
    let mut weights: Vec<f64> = eig.values.iter().map(|&w| w.max(0.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let basis = (0..rho.dim()).map(|k| eig.vectors.column(k)).collect();
    SpectralDecomposition { weights, basis }
}

pub fn bloch_of(rho: &DensityOperator) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::NotQubit(rho.dim()));
    }
    let m = rho.matrix();
    Ok(BlochVector([
        m.trace_product(&ComplexMatrix::pauli_x()).re,
        m.trace_product(&ComplexMatrix::pauli_y()).re,
        m.trace_product(&ComplexMatrix::pauli_z()).re,
    ]))
}

/// ρ = GG†/Tr(GG†) with G a seeded matrix of standard complex Gaussians.
pub fn random_density(dim: usize, seed: u64) -> DensityOperator {
    assert!(dim >= 1, "random_density needs dim >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let g = ComplexMatrix::from_fn(dim, |_, _| {
        C64::new(draw(), draw()) * std::f64::consts::FRAC_1_SQRT_2
    });
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityOperator::from_matrix_unchecked(gg.scale_real(1.0 / tr).hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_3, PI};

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    fn real_diag(d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&d.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn qubit_state_examples() {
        let mm = qubit_state(0.0, 1.2, -0.4).unwrap();
        assert!(close(mm.matrix(), &real_diag(&[0.5, 0.5]), 1e-15));

        let north = qubit_state(1.0, 0.0, 0.0).unwrap();
        assert!(close(north.matrix(), &real_diag(&[1.0, 0.0]), 1e-15));

        let (r, th) = (0.6, 0.9);
        let s = qubit_state(r, th, 0.0).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            vec![0.5 * (1.0 + r * th.cos()), 0.5 * r * th.sin()],
            vec![0.5 * r * th.sin(), 0.5 * (1.0 - r * th.cos())],
        ])
        .unwrap();
        assert!(close(s.matrix(), &expected, 1e-15));
    }

    #[test]
    fn qubit_state_rejects_bad_purity() {
        assert_eq!(qubit_state(1.5, 0.0, 0.0), Err(Error::InvalidPurity(1.5)));
        assert!(qubit_state(-0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn spectral_decomposition_of_tilted_state() {
        let (r, th) = (0.5, FRAC_PI_3);
        let sd = spectral_decompose(&qubit_state(r, th, 0.0).unwrap());
        assert!((sd.weights[0] - (1.0 - r) / 2.0).abs() < 1e-14);
        assert!((sd.weights[1] - (1.0 + r) / 2.0).abs() < 1e-14);
        // the heavier eigenvector points along +(sinθ, 0, cosθ)
        let plus = DensityOperator::pure(&sd.basis[1]).unwrap();
        let b = bloch_of(&plus).unwrap();
        assert!(b.distance(&BlochVector([th.sin(), 0.0, th.cos()])) < 1e-12);
        let minus = DensityOperator::pure(&sd.basis[0]).unwrap();
        let b = bloch_of(&minus).unwrap();
        assert!(b.distance(&BlochVector([-th.sin(), 0.0, -th.cos()])) < 1e-12);
    }

    #[test]
    fn spectral_decomposition_degenerate_and_diagonal() {
        let sd = spectral_decompose(&DensityOperator::maximally_mixed(2));
        assert!(sd.weights.iter().all(|w| (w - 0.5).abs() < 1e-15));

        let rho = DensityOperator::new(real_diag(&[0.7, 0.3])).unwrap();
        let sd = spectral_decompose(&rho);
        assert!((sd.weights[0] - 0.3).abs() < 1e-15 && (sd.weights[1] - 0.7).abs() < 1e-15);
        assert!((sd.basis[0][1].norm() - 1.0).abs() < 1e-15);
        assert!((sd.basis[1][0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        let rho = DensityOperator::new(real_diag(&[1.0 + 5e-11, -5e-11])).unwrap();
        let sd = spectral_decompose(&rho);
        assert_eq!(sd.weights[0], 0.0);
        assert!((sd.weights[1] - 1.0).abs() < 1e-15);
        assert!(DensityOperator::new(real_diag(&[1.1, -0.1])).is_err());
    }

    #[test]
    fn validation_errors() {
        let not_herm = ComplexMatrix::from_real_rows(&[vec![0.5, 0.2], vec![0.0, 0.5]]).unwrap();
        assert!(matches!(
            DensityOperator::new(not_herm),
            Err(Error::InvalidDensity(_))
        ));
        assert!(DensityOperator::new(real_diag(&[0.5, 0.4])).is_err());
        assert!(matches!(
            DensityOperator::pure(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn bloch_examples() {
        let b = bloch_of(&DensityOperator::maximally_mixed(2)).unwrap();
        assert!(b.norm() < 1e-15);
        let (r, th, ph) = (0.8, 1.1, 2.5);
        let b = bloch_of(&qubit_state(r, th, 0.0).unwrap()).unwrap();
        assert!(b.distance(&BlochVector([r * th.sin(), 0.0, r * th.cos()])) < 1e-15);
        let b = bloch_of(&qubit_state(r, th, ph).unwrap()).unwrap();
        let want = BlochVector([
            r * th.sin() * ph.cos(),
            r * th.sin() * ph.sin(),
            r * th.cos(),
        ]);
        assert!(b.distance(&want) < 1e-15);
        assert_eq!(
            bloch_of(&DensityOperator::maximally_mixed(3)),
            Err(Error::NotQubit(3))
        );
    }

    #[test]
    fn random_density_examples() {
        let one = random_density(1, 42);
        assert!((one.matrix().get(0, 0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(random_density(2, 9), random_density(2, 9));
        assert_ne!(random_density(2, 9), random_density(2, 10));
        let four = random_density(4, 5);
        assert!(DensityOperator::new(four.matrix().clone()).is_ok());
    }

    #[test]
    fn random_density_invariants_over_many_draws() {
        for seed in 0..1000u64 {
            let dim = 1 + (seed % 6) as usize;
            let rho = random_density(dim, seed);
            assert!(
                DensityOperator::new(rho.matrix().clone()).is_ok(),
                "seed {seed}"
            );
        }
    }

    proptest! {
        #[test]
        fn bloch_inverts_qubit_state(r in 0.0..=1.0f64, th in 0.0..PI, ph in -PI..PI) {
            let b = bloch_of(&qubit_state(r, th, ph).unwrap()).unwrap();
            let want = BlochVector([r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()]);
            prop_assert!(b.distance(&want) <= 1e-12);
        }

        #[test]
        fn spectral_reconstruction(seed in any::<u64>(), dim in 1usize..=8) {
            let rho = random_density(dim, seed);
            let sd = spectral_decompose(&rho);
            prop_assert!((&sd.reconstruct() - rho.matrix()).frobenius_norm() <= 1e-10);
            prop_assert!((sd.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
            for (i, u) in sd.basis.iter().enumerate() {
                for (j, v) in sd.basis.iter().enumerate() {
                    let ip: C64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((ip - C64::new(want, 0.0)).norm() <= 1e-10);
                }
            }
        }
    }
}
