//! Phase functionals for a mixed state ρ(0) carried around a cyclic unitary path.
//!
//! - total phase φ = arg Tr[ρ(0)U(τ)]
//! - dynamical phase φ_d = −∫₀^τ Tr[ρ(t)H(t)] dt
//! - geometric phase φ_g = φ − φ_d
//!
//! φ_g is also reachable as the loop integral of the one-form
//! β = i Tr[ρ(0)Ũ†dŨ] with Ũ(t) = e^{−iΦ(t)}U(t), through the pure-state
//! formula i∫⟨φ|φ̇⟩dt when ρ(0) is a projector, and (for global cyclic paths)
//! as the spectrally weighted mean of the eigenvectors' pure-state phases.
//! Those routes are implemented independently so they can cross-check
//! each other.

use std::f64::consts::{PI, TAU};

use crate::evolution::{cyclicity_residual, is_global_cyclic, PathPiece, UnitaryPath};
use crate::matcore::{principal_arg, ComplexMatrix, C64, I};
use crate::quadrature::simpson;
use crate::states::{spectral_decompose, DensityOperator, DENSITY_TOL};
use crate::{Error, Result};

/// |Tr[ρ(0)U(τ)]| below which the total phase is undefined.
pub const NODAL_TOL: f64 = 1e-9;

/// Outcome of a geometric-phase evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseReport {
    /// φ in (−π, π]; NaN when `nodal`.
    pub total: f64,
    /// φ_d, unwrapped.
    pub dynamical: f64,
    /// φ − φ_d, raw; NaN when `nodal`.
    pub geometric: f64,
    /// `geometric` reduced to [0, 2π).
    pub geometric_mod: f64,
    pub trace_magnitude: f64,
    pub cyclicity_residual: f64,
    pub nodal: bool,
}

/// Gauge phase Φ(t) used to close Ũ(t) = e^{−iΦ(t)}U(t); all satisfy Φ(0) = 0, Φ(τ) = φ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GaugePhaseInterpolation {
    #[default]
    Linear,
    /// φ·(t/τ)³
    Cubic,
    /// φ·(3s² − 2s³), s = t/τ
    SmoothStep,
}

impl GaugePhaseInterpolation {
    /// (Φ(t), Φ̇(t)) for end value `total` over duration `tau`.
    fn eval(self, total: f64, tau: f64, t: f64) -> (f64, f64) {
        let s = t / tau;
        let (f, df) = match self {
            Self::Linear => (s, 1.0),
            Self::Cubic => (s * s * s, 3.0 * s * s),
            Self::SmoothStep => (s * s * (3.0 - 2.0 * s), 6.0 * s * (1.0 - s)),
        };
        (total * f, total * df / tau)
    }
}

/// Cyclicity and nodal thresholds.
///
/// `cyclicity: None` selects the path's default (1e−9 for exact propagation,
/// 1e−6 for sampled schedules).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub cyclicity: Option<f64>,
    pub nodal: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cyclicity: None,
            nodal: NODAL_TOL,
        }
    }
}

impl Tolerances {
    pub fn cyclicity_for(&self, path: &UnitaryPath) -> f64 {
        self.cyclicity
            .unwrap_or_else(|| path.kind().default_cyclicity_tol())
    }

    /// Residual ‖U(τ)ρU†(τ) − ρ‖_F, or `NotCyclic` when it exceeds the tolerance.
    pub fn check_cyclic(&self, rho0: &DensityOperator, path: &UnitaryPath) -> Result<f64> {
        let residual = cyclicity_residual(path, rho0)?;
        let tolerance = self.cyclicity_for(path);
        if residual > tolerance {
            Err(Error::NotCyclic {
                residual,
                tolerance,
            })
        } else {
            Ok(residual)
        }
    }

    fn non_nodal(&self, z: C64) -> Result<C64> {
        let magnitude = z.norm();
        if magnitude < self.nodal {
            Err(Error::NodalPoint {
                magnitude,
                tolerance: self.nodal,
            })
        } else {
            Ok(z)
        }
    }

    pub fn total_phase(&self, rho0: &DensityOperator, path: &UnitaryPath) -> Result<f64> {
        self.check_cyclic(rho0, path)?;
        let z = self.non_nodal(final_trace(rho0, path))?;
        Ok(principal_arg(z))
    }

    pub fn dynamical_phase(&self, rho0: &DensityOperator, path: &UnitaryPath) -> Result<f64> {
        self.check_cyclic(rho0, path)?;
        Ok(dynamical_integral(rho0, path))
    }

    /// Full report; nodal inputs are an error.
    pub fn geometric_phase(
        &self,
        rho0: &DensityOperator,
        path: &UnitaryPath,
    ) -> Result<PhaseReport> {
        let report = self.evaluate(rho0, path)?;
        if report.nodal {
            return Err(Error::NodalPoint {
                magnitude: report.trace_magnitude,
                tolerance: self.nodal,
            });
        }
        Ok(report)
    }

    /// Like [`Self::geometric_phase`] but reports nodal inputs with `nodal = true`
    /// and NaN phases instead of failing.
    pub fn evaluate(&self, rho0: &DensityOperator, path: &UnitaryPath) -> Result<PhaseReport> {
        let cyclicity_residual = self.check_cyclic(rho0, path)?;
        let z = final_trace(rho0, path);
        let dynamical = dynamical_integral(rho0, path);
        let trace_magnitude = z.norm();
        let nodal = trace_magnitude < self.nodal;
        let (total, geometric) = if nodal {
            (f64::NAN, f64::NAN)
        } else {
            let total = principal_arg(z);
            (total, total - dynamical)
        };
        Ok(PhaseReport {
            total,
            dynamical,
            geometric,
            geometric_mod: wrap_to_tau(geometric),
            trace_magnitude,
            cyclicity_residual,
            nodal,
        })
    }

    /// ∮ i Tr[ρ(0)Ũ†dŨ], integrated piecewise with Simpson's rule.
    pub fn one_form_integral(
        &self,
        rho0: &DensityOperator,
        path: &UnitaryPath,
        interpolation: GaugePhaseInterpolation,
    ) -> Result<f64> {
        let total = self.total_phase(rho0, path)?;
        let tau = path.duration();
        let rho = rho0.matrix();
        let mut acc = 0.0;
        for piece in path.pieces() {
            let values: Vec<f64> = piece
                .times
                .iter()
                .zip(&piece.unitaries)
                .zip(&piece.generators)
                .map(|((&t, u), h)| {
                    let (phase, rate) = interpolation.eval(total, tau, t);
                    let gauge = C64::from_polar(1.0, -phase);
                    let u_tilde = u.scale(gauge);
                    // dŨ/dt = −iΦ̇Ũ + e^{−iΦ}(−iH U)
                    let u_tilde_dot =
                        &u_tilde.scale(C64::new(0.0, -rate)) + &(h * u).scale(-I * gauge);
                    let inner = &u_tilde.adjoint() * &u_tilde_dot;
                    (I * rho.trace_product(&inner)).re
                })
                .collect();
            acc += simpson(&values, piece.step());
        }
        Ok(acc)
    }

    /// Aharonov–Anandan phase i∫⟨φ(t)|φ̇(t)⟩dt of a pure state, with
    /// |φ(t)⟩ = e^{−iΦt/τ}U(t)|ψ₀⟩ and Φ = arg⟨ψ₀|U(τ)|ψ₀⟩.
    pub fn aa_phase_pure(&self, psi0: &[C64], path: &UnitaryPath) -> Result<f64> {
        let projector = DensityOperator::pure(psi0)?;
        self.check_cyclic(&projector, path)?;
        let overlap = inner(psi0, &path.final_unitary().mul_vec(psi0));
        let total = principal_arg(self.non_nodal(overlap)?);
        let tau = path.duration();
        let mut acc = 0.0;
        for piece in path.pieces() {
            let values: Vec<f64> = piece
                .times
                .iter()
                .zip(&piece.unitaries)
                .zip(&piece.generators)
                .map(|((&t, u), h)| {
                    let gauge = C64::from_polar(1.0, -total * t / tau);
                    let psi = u.mul_vec(psi0);
                    let h_psi = h.mul_vec(&psi);
                    let phi: Vec<C64> = psi.iter().map(|z| z * gauge).collect();
                    let phi_dot: Vec<C64> = phi
                        .iter()
                        .zip(&h_psi)
                        .map(|(p, hp)| p * C64::new(0.0, -total / tau) - I * gauge * hp)
                        .collect();
                    (I * inner(&phi, &phi_dot)).re
                })
                .collect();
            acc += simpson(&values, piece.step());
        }
        Ok(acc)
    }

    /// Σ_k w_k φ_g^k over the spectral decomposition of ρ(0); global cyclic paths only.
    pub fn weighted_decomposition_phase(
        &self,
        rho0: &DensityOperator,
        path: &UnitaryPath,
    ) -> Result<f64> {
        if is_global_cyclic(path).is_none() {
            return Err(Error::NotGlobalCyclic);
        }
        let sd = spectral_decompose(rho0);
        let mut acc = 0.0;
        for (w, v) in sd.weights.iter().zip(&sd.basis) {
            acc += w * self.aa_phase_pure(v, path)?;
        }
        Ok(acc)
    }

    /// Tr[ρ(0)U(τ)]/|Tr[ρ(0)U(τ)]|.
    pub fn holonomy_factor(&self, rho0: &DensityOperator, path: &UnitaryPath) -> Result<C64> {
        if rho0.dim() != path.dim() {
            return Err(Error::DimensionMismatch {
                expected: path.dim(),
                found: rho0.dim(),
            });
        }
        let z = self.non_nodal(final_trace(rho0, path))?;
        Ok(z / z.norm())
    }
}

fn final_trace(rho0: &DensityOperator, path: &UnitaryPath) -> C64 {
    rho0.matrix().trace_product(path.final_unitary())
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Tr[ρ(t_n)H(t_n)] = Tr[ρ(0)U†HU] at each node of a piece.
pub(crate) fn energy_samples(rho0: &ComplexMatrix, piece: &PathPiece) -> Vec<f64> {
    piece
        .unitaries
        .iter()
        .zip(&piece.generators)
        .map(|(u, h)| rho0.trace_product(&(&u.adjoint() * &(h * u))).re)
        .collect()
}

/// ∫ Tr[ρ(t)H(t)] dt over one piece: exact for constant generators, Simpson otherwise.
pub(crate) fn piece_energy_integral(rho0: &ComplexMatrix, piece: &PathPiece) -> f64 {
    if piece.constant {
        let u = &piece.unitaries[0];
        let e = rho0
            .trace_product(&(&u.adjoint() * &(&piece.generators[0] * u)))
            .re;
        e * piece.duration()
    } else {
        simpson(&energy_samples(rho0, piece), piece.step())
    }
}

/// −∫₀^τ Tr[ρ(t)H(t)] dt without any cyclicity check.
pub(crate) fn dynamical_integral(rho0: &DensityOperator, path: &UnitaryPath) -> f64 {
    -path
        .pieces()
        .iter()
        .map(|p| piece_energy_integral(rho0.matrix(), p))
        .sum::<f64>()
}

fn wrap_to_tau(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// min_k |a − b − 2πk|, in [0, π].
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d).clamp(0.0, PI)
}

pub fn total_phase(rho0: &DensityOperator, path: &UnitaryPath) -> Result<f64> {
    Tolerances::default().total_phase(rho0, path)
}

pub fn dynamical_phase(rho0: &DensityOperator, path: &UnitaryPath) -> Result<f64> {
    Tolerances::default().dynamical_phase(rho0, path)
}

pub fn geometric_phase(rho0: &DensityOperator, path: &UnitaryPath) -> Result<PhaseReport> {
    Tolerances::default().geometric_phase(rho0, path)
}

pub fn one_form_integral(
    rho0: &DensityOperator,
    path: &UnitaryPath,
    interpolation: GaugePhaseInterpolation,
) -> Result<f64> {
    Tolerances::default().one_form_integral(rho0, path, interpolation)
}

pub fn aa_phase_pure(psi0: &[C64], path: &UnitaryPath) -> Result<f64> {
    Tolerances::default().aa_phase_pure(psi0, path)
}

pub fn weighted_decomposition_phase(rho0: &DensityOperator, path: &UnitaryPath) -> Result<f64> {
    Tolerances::default().weighted_decomposition_phase(rho0, path)
}

pub fn holonomy_factor(rho0: &DensityOperator, path: &UnitaryPath) -> Result<C64> {
    Tolerances::default().holonomy_factor(rho0, path)
}

/// True when the state is (numerically) pure.
pub fn is_pure(rho: &DensityOperator) -> bool {
    (rho.purity() - 1.0).abs() <= DENSITY_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{propagate, HamiltonianSchedule, Segment};
    use crate::scenarios::{example_one, example_two};
    use crate::states::{qubit_state, random_density};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn identity_path(dim: usize) -> UnitaryPath {
        propagate(&HamiltonianSchedule::zero(dim, 1.0).unwrap(), 8).unwrap()
    }

    fn ex1(r: f64, th: f64) -> (DensityOperator, UnitaryPath) {
        let s = example_one(r, th, 1.0).unwrap();
        let p = s.propagate(256).unwrap();
        (s.rho0, p)
    }

    fn ex2(r: f64, th: f64, ph: f64) -> (DensityOperator, UnitaryPath) {
        let s = example_two(r, th, ph, 1.0).unwrap();
        let p = s.propagate(256).unwrap();
        (s.rho0, p)
    }

    #[test]
    fn total_phase_examples() {
        let (rho, p) = ex1(0.4, 1.0);
        assert_eq!(total_phase(&rho, &p).unwrap(), PI);
        assert_eq!(total_phase(&rho, &identity_path(2)).unwrap(), 0.0);
        let (r, ph) = (0.6, 1.7);
        let (rho, p) = ex2(r, 0.8, ph);
        let want = -(r * (ph / 2.0).tan()).atan();
        assert!((total_phase(&rho, &p).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn total_phase_is_plus_pi_for_minus_identity() {
        for seed in 0..20 {
            let rho = random_density(2, seed);
            let path = ex1(0.5, 1.0).1;
            assert_eq!(total_phase(&rho, &path).unwrap(), PI);
        }
    }

    #[test]
    fn dynamical_phase_examples() {
        let (r, th) = (0.3, 0.7);
        let (rho, p) = ex1(r, th);
        assert!((dynamical_phase(&rho, &p).unwrap() - PI * r * th.cos()).abs() < 1e-12);
        assert_eq!(dynamical_phase(&rho, &identity_path(2)).unwrap(), 0.0);
        let (r, th, ph) = (0.8, 1.2, 2.4);
        let (rho, p) = ex2(r, th, ph);
        let want = -(ph / 2.0) * r * th.cos();
        assert!((dynamical_phase(&rho, &p).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn geometric_phase_examples() {
        let (r, th) = (0.5, FRAC_PI_3);
        let (rho, p) = ex1(r, th);
        let rep = geometric_phase(&rho, &p).unwrap();
        assert!(phase_distance(rep.geometric, PI * (1.0 - r * th.cos())) < 1e-12);
        assert_eq!(rep.geometric, rep.total - rep.dynamical);
        assert!((0.0..TAU).contains(&rep.geometric_mod));
        assert!(!rep.nodal);

        let (r, th, ph) = (0.7, 1.1, 2.0);
        let (rho, p) = ex2(r, th, ph);
        let want = -(r * (ph / 2.0).tan()).atan() + ph / 2.0 * r * th.cos();
        assert!(phase_distance(geometric_phase(&rho, &p).unwrap().geometric, want) < 1e-12);

        let (rho, p) = ex2(r, FRAC_PI_2, ph);
        let rep = geometric_phase(&rho, &p).unwrap();
        assert!(rep.dynamical.abs() < 1e-12);
        assert!(phase_distance(rep.geometric, -(r * (ph / 2.0).tan()).atan()) < 1e-12);
    }

    #[test]
    fn one_form_examples() {
        let (r, th) = (0.45, 0.9);
        let (rho, p) = ex1(r, th);
        let want = PI * (1.0 - r * th.cos());
        for interp in [
            GaugePhaseInterpolation::Linear,
            GaugePhaseInterpolation::Cubic,
            GaugePhaseInterpolation::SmoothStep,
        ] {
            let v = one_form_integral(&rho, &p, interp).unwrap();
            assert!((v - want).abs() < 1e-6, "{interp:?}: {v}");
        }
        let rho = random_density(2, 3);
        let v = one_form_integral(&rho, &identity_path(2), GaugePhaseInterpolation::Cubic).unwrap();
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn aa_phase_examples() {
        let th = 1.3;
        let path = ex1(1.0, th).1;
        let psi = [
            C64::new((th / 2.0).cos(), 0.0),
            C64::new((th / 2.0).sin(), 0.0),
        ];
        let v = aa_phase_pure(&psi, &path).unwrap();
        assert!(phase_distance(v, PI * (1.0 - th.cos())) < 1e-10);

        let north = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        assert!(phase_distance(aa_phase_pure(&north, &path).unwrap(), 0.0) < 1e-12);

        let tri = ex2(1.0, FRAC_PI_2, FRAC_PI_2).1;
        let v = aa_phase_pure(&north, &tri).unwrap();
        assert!((v + FRAC_PI_4).abs() < 1e-10);

        assert!(matches!(
            aa_phase_pure(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)], &tri),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn weighted_decomposition_examples() {
        let (r, th) = (0.35, 2.1);
        let (rho, p) = ex1(r, th);
        let want = PI * (1.0 - r * th.cos());
        assert!(phase_distance(weighted_decomposition_phase(&rho, &p).unwrap(), want) < 1e-8);

        let pure = qubit_state(1.0, 0.6, 0.2).unwrap();
        let sd = spectral_decompose(&pure);
        let single = aa_phase_pure(&sd.basis[1], &p).unwrap();
        assert!(phase_distance(weighted_decomposition_phase(&pure, &p).unwrap(), single) < 1e-12);

        for seed in 0..10 {
            let rho = random_density(2, seed);
            let a = weighted_decomposition_phase(&rho, &p).unwrap();
            let b = geometric_phase(&rho, &p).unwrap().geometric;
            assert!(phase_distance(a, b) < 1e-8);
        }

        let (rho, p2) = ex2(0.5, 1.0, 1.0);
        assert_eq!(
            weighted_decomposition_phase(&rho, &p2),
            Err(Error::NotGlobalCyclic)
        );
    }

    #[test]
    fn degenerate_basis_choice_does_not_matter() {
        // I/2 under Example I: any orthonormal basis gives π.
        let p = ex1(0.5, 1.0).1;
        let mm = DensityOperator::maximally_mixed(2);
        assert!(phase_distance(weighted_decomposition_phase(&mm, &p).unwrap(), PI) < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [C64::new(s, 0.0), C64::new(s, 0.0)];
        let minus = [C64::new(s, 0.0), C64::new(-s, 0.0)];
        let alt =
            0.5 * aa_phase_pure(&plus, &p).unwrap() + 0.5 * aa_phase_pure(&minus, &p).unwrap();
        assert!(phase_distance(alt, PI) < 1e-12);
    }

    #[test]
    fn holonomy_examples() {
        let (rho, p) = ex1(0.5, 0.4);
        assert!((holonomy_factor(&rho, &p).unwrap() + C64::new(1.0, 0.0)).norm() < 1e-15);
        let h = holonomy_factor(&rho, &identity_path(2)).unwrap();
        assert!((h - C64::new(1.0, 0.0)).norm() < 1e-15);
        let (rho, p) = ex2(1.0, FRAC_PI_2, FRAC_PI_2);
        let h = holonomy_factor(&rho, &p).unwrap();
        assert!((h - C64::from_polar(1.0, -FRAC_PI_4)).norm() < 1e-12);
    }

    #[test]
    fn phase_distance_examples() {
        assert!(phase_distance(PI, -PI) < 1e-15);
        assert!(phase_distance(0.0, TAU) < 1e-15);
        assert!((phase_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-14);
    }

    #[test]
    fn nodal_point_is_an_error_not_nan() {
        // I/2 with U(τ) = diag(−i, i): Tr = 0
        let sched =
            HamiltonianSchedule::piecewise(vec![Segment::new(FRAC_PI_2, ComplexMatrix::pauli_z())])
                .unwrap();
        let p = propagate(&sched, 8).unwrap();
        let mm = DensityOperator::maximally_mixed(2);
        assert!(matches!(
            total_phase(&mm, &p),
            Err(Error::NodalPoint { .. })
        ));
        assert!(matches!(
            geometric_phase(&mm, &p),
            Err(Error::NodalPoint { .. })
        ));
        assert!(matches!(
            holonomy_factor(&mm, &p),
            Err(Error::NodalPoint { .. })
        ));
        assert!(matches!(
            one_form_integral(&mm, &p, GaugePhaseInterpolation::Linear),
            Err(Error::NodalPoint { .. })
        ));
        let rep = Tolerances::default().evaluate(&mm, &p).unwrap();
        assert!(rep.nodal && rep.total.is_nan() && rep.geometric.is_nan());
    }

    #[test]
    fn non_cyclic_is_refused() {
        let p = ex2(0.5, 1.0, 1.0).1;
        let tilted = qubit_state(0.5, FRAC_PI_3, 0.0).unwrap();
        assert!(matches!(
            geometric_phase(&tilted, &p),
            Err(Error::NotCyclic { .. })
        ));
        assert!(matches!(
            dynamical_phase(&tilted, &p),
            Err(Error::NotCyclic { .. })
        ));
        let loose = Tolerances {
            cyclicity: Some(10.0),
            ..Tolerances::default()
        };
        assert!(loose.geometric_phase(&tilted, &p).is_ok());
    }

    #[test]
    fn pure_state_reduction_matches_mixed_route() {
        let p = ex2(1.0, 1.2, 2.2).1;
        let north = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let rho = DensityOperator::pure(&north).unwrap();
        let a = aa_phase_pure(&north, &p).unwrap();
        let b = geometric_phase(&rho, &p).unwrap().geometric;
        assert!((a - b).abs() < 1e-10);
        assert!(is_pure(&rho));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn gauge_invariance(r in 0.05..0.95f64, th in 0.3..2.8f64, ph in 0.3..3.0f64, amp in -2.0..2.0f64) {
            // the regauged generator is time dependent, so this is limited by Simpson on δ̇
            let fine = |s: crate::scenarios::ScenarioSpec| {
                let p = s.propagate(2048).unwrap();
                (s.rho0, p)
            };
            for (rho, p) in [fine(example_one(r, th, 1.0).unwrap()), fine(example_two(r, th, ph, 1.0).unwrap())] {
                let tau = p.duration();
                let w = TAU / tau;
                let g = p.regauged(|t| amp * (w * t).sin(), |t| amp * w * (w * t).cos());
                let a = geometric_phase(&rho, &p).unwrap().geometric;
                let b = geometric_phase(&rho, &g).unwrap().geometric;
                prop_assert!(phase_distance(a, b) <= 1e-9, "{} vs {}", a, b);
            }
        }

        #[test]
        fn routes_agree(r in 0.05..0.95f64, th in 0.3..2.8f64, ph in 0.3..3.0f64) {
            for (rho, p) in [ex1(r, th), ex2(r, th, ph)] {
                let g = geometric_phase(&rho, &p).unwrap().geometric;
                for interp in [GaugePhaseInterpolation::Linear, GaugePhaseInterpolation::Cubic] {
                    prop_assert!(phase_distance(g, one_form_integral(&rho, &p, interp).unwrap()) <= 1e-6);
                }
            }
        }
    }
}
