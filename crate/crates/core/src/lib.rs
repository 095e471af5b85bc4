//! Geometric phases of mixed quantum states under cyclic unitary evolution.
//!
//! The crate is organised bottom-up:
//!
//! - [`matcore`]: dense complex matrices, Hermitian eigendecomposition, exact
//!   exponentials of Hermitian generators, Kronecker products and partial traces.
//! - [`states`]: validated density operators, spectral decompositions and qubit
//!   Bloch vectors.
//! - [`evolution`]: Hamiltonian schedules and time-ordered propagators.
//! - [`phases`]: total, dynamical and geometric phases, the canonical one-form
//!   integral, the pure-state reduction and the spectral weighted average.
//! - [`transport`]: the parallel-transport condition, the U(1) parallel lift and
//!   the non-uniqueness counterexample.
//! - [`composite`]: bipartite states evolving under `I ⊗ U`.
//! - [`scenarios`]: the two spin-½ worked examples and Bloch-path sampling.
//! - [`cli`]: JSON scenario/report formats and the `holonomy` command line.
//!
//! Units: ħ = 1 throughout, so every Hamiltonian is an angular frequency.
//!
//! ```
//! use holonomy::{phases, scenarios};
//!
//! let spec = scenarios::example_one(0.5, std::f64::consts::FRAC_PI_3, 1.0).unwrap();
//! let path = spec.propagate(256).unwrap();
//! let report = phases::geometric_phase(&spec.rho0, &path).unwrap();
//! let expected = 0.75 * std::f64::consts::PI;
//! assert!(phases::phase_distance(report.geometric, expected) < 1e-9);
//! ```

#![forbid(unsafe_code)]

pub mod cli;
pub mod composite;
mod error;
pub mod evolution;
pub mod matcore;
pub mod phases;
pub mod quadrature;
pub mod scenarios;
pub mod states;
pub mod transport;

pub use error::{Error, Result};
pub use evolution::{HamiltonianSchedule, Segment, UnitaryPath};
pub use matcore::{ComplexMatrix, C64};
pub use phases::{PhaseReport, Tolerances};
pub use states::{BlochVector, DensityOperator, SpectralDecomposition};
