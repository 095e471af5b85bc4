//! Bipartite systems evolving under I^A ⊗ U^B.
//!
//! When only subsystem B is driven, the geometric phase of the joint state
//! equals that of the reduced state of B: both the total phase and the
//! dynamical phase reduce to traces against ρ^B = Tr_A ρ^{AB}.

use crate::evolution::UnitaryPath;
use crate::matcore::{kron, partial_trace, ComplexMatrix, Subsystem, C64};
use crate::phases::{phase_distance, PhaseReport, Tolerances};
use crate::states::DensityOperator;
use crate::{Error, Result};

const WEIGHT_SUM_TOL: f64 = 1e-10;

/// A density operator on C^{N_A} ⊗ C^{N_B}.
#[derive(Debug, Clone)]
pub struct CompositeState {
    dim_a: usize,
    dim_b: usize,
    rho_ab: DensityOperator,
}

impl CompositeState {
    pub fn new(rho_ab: DensityOperator, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || rho_ab.dim() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                found: rho_ab.dim(),
            });
        }
        Ok(Self {
            dim_a,
            dim_b,
            rho_ab,
        })
    }

    /// ρ^A ⊗ ρ^B.
    pub fn product(rho_a: &DensityOperator, rho_b: &DensityOperator) -> Self {
        let m = kron(rho_a.matrix(), rho_b.matrix());
        Self {
            dim_a: rho_a.dim(),
            dim_b: rho_b.dim(),
            rho_ab: DensityOperator::from_matrix_unchecked(m),
        }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn rho_ab(&self) -> &DensityOperator {
        &self.rho_ab
    }

    pub fn reduced(&self, keep: Subsystem) -> DensityOperator {
        let m = partial_trace(self.rho_ab.matrix(), self.dim_a, self.dim_b, keep)
            .expect("dimensions checked at construction");
        DensityOperator::from_matrix_unchecked(m.hermitian_part())
    }

    pub fn reduced_b(&self) -> DensityOperator {
        self.reduced(Subsystem::B)
    }

    /// r^B_j = Tr[ρ^{AB}(I ⊗ σ_j)] for a qubit B, i.e. the Bloch vector of ρ^B.
    pub fn pauli_coefficients_b(&self) -> Result<[f64; 3]> {
        if self.dim_b != 2 {
            return Err(Error::NotQubit(self.dim_b));
        }
        let id = ComplexMatrix::identity(self.dim_a);
        let coefficient = |s: ComplexMatrix| self.rho_ab.matrix().trace_product(&kron(&id, &s)).re;
        Ok([
            coefficient(ComplexMatrix::pauli_x()),
            coefficient(ComplexMatrix::pauli_y()),
            coefficient(ComplexMatrix::pauli_z()),
        ])
    }
}

/// Replace every U^B(t_n) by I ⊗ U^B(t_n) and every H^B(t_n) by I ⊗ H^B(t_n).
pub fn lift_unitary(u_b: &UnitaryPath, dim_a: usize) -> UnitaryPath {
    let id = ComplexMatrix::identity(dim_a);
    u_b.map_matrices(|m| kron(&id, m))
}

/// ρ^{AB} = Σᵢ wᵢ |i⟩⟨i| ⊗ ρᵢ^B.
pub fn build_correlated(weights: &[f64], states_b: &[DensityOperator]) -> Result<CompositeState> {
    if weights.is_empty() || weights.len() != states_b.len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} states",
            weights.len(),
            states_b.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::InvalidWeights(format!(
            "weight {w} is not a probability"
        )));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    let dim_b = states_b[0].dim();
    if let Some(s) = states_b.iter().find(|s| s.dim() != dim_b) {
        return Err(Error::DimensionMismatch {
            expected: dim_b,
            found: s.dim(),
        });
    }
    let dim_a = weights.len();
    let mut m = ComplexMatrix::zeros(dim_a * dim_b);
    for (i, (w, rho)) in weights.iter().zip(states_b).enumerate() {
        let mut proj = vec![C64::new(0.0, 0.0); dim_a];
        proj[i] = C64::new(1.0, 0.0);
        let block = kron(&ComplexMatrix::from_diagonal(&proj), rho.matrix());
        m = &m + &block.scale_real(*w);
    }
    CompositeState::new(DensityOperator::from_matrix_unchecked(m), dim_a, dim_b)
}

/// Phases of the joint state under I ⊗ U^B alongside those of ρ^B under U^B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremCheck {
    pub composite: PhaseReport,
    pub reduced: PhaseReport,
    /// phase_distance between the two geometric phases.
    pub agreement: f64,
}

impl TheoremCheck {
    /// Largest of the geometric, total and dynamical discrepancies.
    pub fn worst_discrepancy(&self) -> f64 {
        self.agreement
            .max(phase_distance(self.composite.total, self.reduced.total))
            .max((self.composite.dynamical - self.reduced.dynamical).abs())
    }
}

pub fn theorem_check(state: &CompositeState, u_b: &UnitaryPath) -> Result<TheoremCheck> {
    theorem_check_with(&Tolerances::default(), state, u_b)
}

pub fn theorem_check_with(
    tol: &Tolerances,
    state: &CompositeState,
    u_b: &UnitaryPath,
) -> Result<TheoremCheck> {
    if u_b.dim() != state.dim_b {
        return Err(Error::DimensionMismatch {
            expected: state.dim_b,
            found: u_b.dim(),
        });
    }
    let lifted = lift_unitary(u_b, state.dim_a);
    let composite = tol.geometric_phase(&state.rho_ab, &lifted)?;
    let reduced = tol.geometric_phase(&state.reduced_b(), u_b)?;
    Ok(TheoremCheck {
        composite,
        reduced,
        agreement: phase_distance(composite.geometric, reduced.geometric),
    })
}
