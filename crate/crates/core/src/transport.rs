//! Parallel transport of a mixed state along a unitary path.
//!
//! The parallel condition is Tr[ρ(t)U̇(t)U†(t)] = 0, equivalently
//! Tr[ρ(0)U†(t)U̇(t)] = 0. Any path can be brought into this form by a U(1)
//! factor, U′(t) = e^{iξ(t)}U(t) with ξ̇ = Tr[ρ(t)H(t)] and ξ(0) = 0, and then
//! arg Tr[ρ(0)U′(τ)] is the geometric phase. Other (non-U(1)) parallel
//! transports exist but do not reproduce it; [`counterexample_lift`] builds one.

use std::f64::consts::PI;

use crate::evolution::{propagate, UnitaryPath};
use crate::matcore::{principal_arg, ComplexMatrix, C64, I};
use crate::phases::{energy_samples, geometric_phase, Tolerances};
use crate::quadrature::cumulative_simpson;
use crate::scenarios::example_one;
use crate::states::{qubit_state, DensityOperator};
use crate::{Error, Result};

/// A path lifted by the unique U(1) factor that makes it parallel for `rho0`.
#[derive(Debug, Clone)]
pub struct TransportedPath {
    rho0: DensityOperator,
    base: UnitaryPath,
    /// ξ(t_n) on the flat grid of `base`.
    xi: Vec<f64>,
    lifted: UnitaryPath,
}

impl TransportedPath {
    pub fn base(&self) -> &UnitaryPath {
        &self.base
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn xi_final(&self) -> f64 {
        *self.xi.last().unwrap()
    }

    /// U′(t) = e^{iξ(t)}U(t), with generator H(t) − ξ̇(t)I.
    pub fn lifted(&self) -> &UnitaryPath {
        &self.lifted
    }

    pub fn rho0(&self) -> &DensityOperator {
        &self.rho0
    }

    /// Parallel residual of the lifted path.
    pub fn residual(&self) -> f64 {
        parallel_residual(&self.rho0, &self.lifted).expect("dimensions checked at construction")
    }
}

/// |Tr[ρ(0)U†U̇]| at one node.
fn transport_defect(rho0: &ComplexMatrix, u: &ComplexMatrix, u_dot: &ComplexMatrix) -> f64 {
    rho0.trace_product(&(&u.adjoint() * u_dot)).norm()
}

/// max_n |Tr[ρ(t_n)U̇(t_n)U†(t_n)]| with U̇ = −iHU, evaluated on both sides of
/// every segment boundary.
pub fn parallel_residual(rho0: &DensityOperator, path: &UnitaryPath) -> Result<f64> {
    if rho0.dim() != path.dim() {
        return Err(Error::DimensionMismatch {
            expected: path.dim(),
            found: rho0.dim(),
        });
    }
    let mut worst = 0.0f64;
    for piece in path.pieces() {
        for (u, h) in piece.unitaries().iter().zip(piece.generators()) {
            let u_dot = (h * u).scale(-I);
            worst = worst.max(transport_defect(rho0.matrix(), u, &u_dot));
        }
    }
    Ok(worst)
}

/// Lift `path` by e^{iξ(t)} with ξ̇ = Tr[ρ(t)H(t)], ξ(0) = 0.
///
/// ξ is exact on constant-generator segments and accumulated by cumulative
/// Simpson elsewhere; either way ξ(τ) = −φ_d.
pub fn parallel_lift(rho0: &DensityOperator, path: &UnitaryPath) -> Result<TransportedPath> {
    parallel_lift_with(&Tolerances::default(), rho0, path)
}

pub fn parallel_lift_with(
    tol: &Tolerances,
    rho0: &DensityOperator,
    path: &UnitaryPath,
) -> Result<TransportedPath> {
    tol.check_cyclic(rho0, path)?;
    let mut per_piece: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(path.pieces().len());
    let mut offset = 0.0;
    for piece in path.pieces() {
        let rates = energy_samples(rho0.matrix(), piece);
        let values: Vec<f64> = if piece.is_constant() {
            let t0 = piece.times()[0];
            piece
                .times()
                .iter()
                .map(|t| offset + (t - t0) * rates[0])
                .collect()
        } else {
            cumulative_simpson(&rates, piece.step())
                .into_iter()
                .map(|v| offset + v)
                .collect()
        };
        offset = *values.last().unwrap();
        per_piece.push((values, rates));
    }
    let lifted = path.with_scalar_gauge(|p, k, _| (per_piece[p].0[k], per_piece[p].1[k]));
    let xi = per_piece
        .iter()
        .enumerate()
        .flat_map(|(p, (values, _))| values.iter().skip(usize::from(p > 0)).copied())
        .collect();
    Ok(TransportedPath {
        rho0: rho0.clone(),
        base: path.clone(),
        xi,
        lifted,
    })
}

/// arg Tr[ρ(0)U′(τ)] for a U(1)-lifted path.
pub fn sjoqvist_phase(rho0: &DensityOperator, lifted: &TransportedPath) -> Result<f64> {
    sjoqvist_phase_with(&Tolerances::default(), rho0, lifted)
}

pub fn sjoqvist_phase_with(
    tol: &Tolerances,
    rho0: &DensityOperator,
    lifted: &TransportedPath,
) -> Result<f64> {
    let z = rho0.matrix().trace_product(lifted.lifted().final_unitary());
    let magnitude = z.norm();
    if magnitude < tol.nodal {
        return Err(Error::NodalPoint {
            magnitude,
            tolerance: tol.nodal,
        });
    }
    Ok(principal_arg(z))
}

/// Result of the alternative (non-U(1)) parallel transport on Example I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Counterexample {
    /// max_t |Tr[ρ₊U″†U̇″]|
    pub residual_plus: f64,
    /// max_t |Tr[ρ₋U″†U̇″]|
    pub residual_minus: f64,
    /// arg Tr[ρ(0)U″(τ)]
    pub phase: f64,
    /// Geometric phase of the underlying Example I evolution.
    pub geometric: f64,
}

const COUNTEREXAMPLE_SAMPLES: usize = 256;

/// U″(t) = e^{iωtσ_z} e^{−iωt cosθ (n·σ)} and its analytic derivative, with
/// n = (sinθ, 0, cosθ) and ω = 1.
fn counterexample_unitary(theta: f64, t: f64) -> (ComplexMatrix, ComplexMatrix) {
    let z = ComplexMatrix::pauli_z();
    let n_sigma = &ComplexMatrix::pauli_x().scale_real(theta.sin()) + &z.scale_real(theta.cos());
    let c = theta.cos();
    let rot = |a: f64, m: &ComplexMatrix| {
        // e^{i a m} for m² = I
        &ComplexMatrix::identity(2).scale_real(a.cos()) + &m.scale(C64::new(0.0, a.sin()))
    };
    let left = rot(t, &z);
    let right = rot(-t * c, &n_sigma);
    let u = &left * &right;
    // d/dt: iσ_z U″ + e^{itσ_z}(−i cosθ n·σ) e^{−it cosθ n·σ}
    let u_dot = &(&z * &u).scale(I) + &(&left * &(&n_sigma * &right)).scale(C64::new(0.0, -c));
    (u, u_dot)
}

/// Build U″ on the Example I timeline (ω = 1, τ = π) for ρ(0) with Bloch
/// vector r(sinθ, 0, cosθ), and report its parallel residuals for both
/// eigenprojectors alongside arg Tr[ρ(0)U″(τ)] and the true geometric phase.
pub fn counterexample_lift(r: f64, theta: f64) -> Result<Counterexample> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidPurity(r));
    }
    if (PI * theta.cos()).cos().abs() < 1e-9 {
        return Err(Error::SingularParameter(format!(
            "cos(pi cos theta) vanishes at theta = {theta}"
        )));
    }
    let rho0 = qubit_state(r, theta, 0.0)?;
    let rho_plus = qubit_state(1.0, theta, 0.0)?;
    let rho_minus = qubit_state(1.0, theta + PI, 0.0)?;

    let tau = PI;
    let (mut residual_plus, mut residual_minus) = (0.0f64, 0.0f64);
    let mut u_final = ComplexMatrix::identity(2);
    for k in 0..=COUNTEREXAMPLE_SAMPLES {
        let t = tau * k as f64 / COUNTEREXAMPLE_SAMPLES as f64;
        let (u, u_dot) = counterexample_unitary(theta, t);
        residual_plus = residual_plus.max(transport_defect(rho_plus.matrix(), &u, &u_dot));
        residual_minus = residual_minus.max(transport_defect(rho_minus.matrix(), &u, &u_dot));
        u_final = u;
    }
    let z = rho0.matrix().trace_product(&u_final);
    let spec = example_one(r, theta, 1.0)?;
    let path = propagate(&spec.schedule, COUNTEREXAMPLE_SAMPLES)?;
    let geometric = geometric_phase(&rho0, &path)?.geometric;
    Ok(Counterexample {
        residual_plus,
        residual_minus,
        phase: principal_arg(z),
        geometric,
    })
}
