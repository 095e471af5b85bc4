//! Built-in spin-½ scenarios with closed-form expectations, plus Bloch-path sampling.
//!
//! Example I: constant field along z, H = −ωσ_z for τ = π/ω, so U(τ) = −I and
//! every qubit state is cyclic.
//!
//! Example II: a three-leg field sequence carrying (I + rσ_z)/2 around the
//! spherical triangle north pole → B → C → north pole. The Hamiltonians are
//! fixed by requiring the propagator to be
//!
//! ```text
//! U(t) = e^{−iωtσ_y}                                             0 ≤ t ≤ t₁
//!        e^{−iω(t−t₁)σ_z} e^{−i(θ/2)σ_y}                          t₁ ≤ t ≤ t₂
//!        e^{−iω(t−t₂)(sinφσ_x − cosφσ_y)} e^{−i(φ/2)σ_z} e^{−i(θ/2)σ_y}   t₂ ≤ t ≤ τ
//! ```
//!
//! with t₁ = θ/2ω, t₂ = (θ+φ)/2ω, τ = (2θ+φ)/2ω.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::evolution::{propagate, HamiltonianSchedule, Segment, UnitaryPath};
use crate::matcore::{hermitian_eig_unchecked, ComplexMatrix, C64};
use crate::states::{bloch_of, qubit_state, random_density, BlochVector, DensityOperator};
use crate::{Error, Result};

/// Closed-form phases a scenario is expected to reproduce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedPhases {
    pub total: f64,
    pub dynamical: f64,
    pub geometric: f64,
    /// Which closed form produced the numbers.
    pub source: &'static str,
}

#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub name: String,
    pub rho0: DensityOperator,
    pub schedule: HamiltonianSchedule,
    pub expected: Option<ExpectedPhases>,
}

impl ScenarioSpec {
    pub fn propagate(&self, samples_per_segment: usize) -> Result<UnitaryPath> {
        propagate(&self.schedule, samples_per_segment)
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSchedule(format!(
            "omega {omega} must be positive"
        )))
    }
}

/// φ = π, φ_d = πr cosθ, φ_g = π(1 − r cosθ).
pub fn example_one_closed_form(r: f64, theta: f64) -> ExpectedPhases {
    let dynamical = PI * r * theta.cos();
    ExpectedPhases {
        total: PI,
        dynamical,
        geometric: PI * (1.0 - r * theta.cos()),
        source: "example I: phi_g = pi(1 - r cos theta)",
    }
}

/// Spin-½ in the constant field H = −ωσ_z for one period τ = π/ω.
pub fn example_one(r: f64, theta: f64, omega: f64) -> Result<ScenarioSpec> {
    check_omega(omega)?;
    let rho0 = qubit_state(r, theta, 0.0)?;
    let schedule = HamiltonianSchedule::piecewise(vec![Segment::new(
        PI / omega,
        ComplexMatrix::pauli_z().scale_real(-omega),
    )])?;
    Ok(ScenarioSpec {
        name: "example1".into(),
        rho0,
        schedule,
        expected: Some(example_one_closed_form(r, theta)),
    })
}

/// φ = −arctan[r tan(φ/2)], φ_d = −(φ/2) r cosθ, φ_g = φ − φ_d.
///
/// For φ > π the arctangent is continued continuously in φ (shifted by −π),
/// which keeps the total phase equal to arg(cos(φ/2) − i r sin(φ/2)); at
/// φ = 2π this gives φ_g ≡ π(1 + r cosθ) mod 2π.
pub fn example_two_closed_form(r: f64, theta: f64, phi: f64) -> ExpectedPhases {
    let mut total = -(r * (phi / 2.0).tan()).atan();
    if phi > PI {
        total -= PI;
    }
    let dynamical = -(phi / 2.0) * r * theta.cos();
    ExpectedPhases {
        total,
        dynamical,
        geometric: total - dynamical,
        source: "example II: phi_g = -arctan[r tan(phi/2)] + (phi/2) r cos theta",
    }
}

/// (I + rσ_z)/2 driven around the triangle with apex angle θ and azimuth φ.
pub fn example_two(r: f64, theta: f64, phi: f64, omega: f64) -> Result<ScenarioSpec> {
    check_omega(omega)?;
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::InvalidAngle(format!(
            "theta {theta} must lie in (0, pi)"
        )));
    }
    if !(phi > 0.0 && phi <= 2.0 * PI) {
        return Err(Error::InvalidAngle(format!(
            "phi {phi} must lie in (0, 2pi]"
        )));
    }
    let rho0 = qubit_state(r, 0.0, 0.0)?;
    let (x, y, z) = (
        ComplexMatrix::pauli_x(),
        ComplexMatrix::pauli_y(),
        ComplexMatrix::pauli_z(),
    );
    let last = &x.scale_real(omega * phi.sin()) - &y.scale_real(omega * phi.cos());
    let schedule = HamiltonianSchedule::piecewise(vec![
        Segment::new(theta / (2.0 * omega), y.scale_real(omega)),
        Segment::new(phi / (2.0 * omega), z.scale_real(omega)),
        Segment::new(theta / (2.0 * omega), last),
    ])?;
    Ok(ScenarioSpec {
        name: "example2".into(),
        rho0,
        schedule,
        expected: Some(example_two_closed_form(r, theta, phi)),
    })
}

/// Random cyclic scenario: a random leg h, a middle leg generated by
/// U₁KU₁† with K diagonal in ρ(0)'s eigenbasis, then h reversed. The result
/// is U(τ) = e^{−id₂K}, which commutes with ρ(0) but is generically not scalar.
///
/// K's spectrum and d₂ are bounded so the eigenphases span less than π and
/// the scenario is never nodal.
pub fn random_cyclic(dim: usize, seed: u64) -> Result<ScenarioSpec> {
    let rho0 = random_density(dim, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let h = ComplexMatrix::from_fn(dim, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
    .hermitian_part();
    let d1 = rng.random_range(0.3..1.5);
    let d2 = rng.random_range(0.2..1.2);
    let eig = hermitian_eig_unchecked(rho0.matrix());
    let spectrum: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), 0.0))
        .collect();
    let k = &(&eig.vectors * &ComplexMatrix::from_diagonal(&spectrum)) * &eig.vectors.adjoint();
    let u1 = hermitian_eig_unchecked(&h).exp_i(-d1);
    let middle = &(&u1 * &k) * &u1.adjoint();
    let schedule = HamiltonianSchedule::piecewise(vec![
        Segment::new(d1, h.clone()),
        Segment::new(d2, middle.hermitian_part()),
        Segment::new(d1, -&h),
    ])?;
    Ok(ScenarioSpec {
        name: format!("random-cyclic-{dim}-{seed}"),
        rho0,
        schedule,
        expected: None,
    })
}

/// Bloch vectors of ρ(t) = U(t)ρ(0)U†(t) on `samples` uniform times over [0, τ].
pub fn bloch_path(spec: &ScenarioSpec, samples: usize) -> Result<Vec<(f64, BlochVector)>> {
    if spec.rho0.dim() != 2 {
        return Err(Error::NotQubit(spec.rho0.dim()));
    }
    if samples < 2 {
        return Err(Error::InvalidSchedule(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    let tau = spec.schedule.duration();
    (0..samples)
        .map(|n| {
            let t = if n + 1 == samples {
                tau
            } else {
                tau * n as f64 / (samples - 1) as f64
            };
            let u = spec.schedule.propagator_at(t);
            Ok((t, bloch_of(&spec.rho0.conjugate_by(&u))?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::cyclicity_residual;
    use crate::matcore::expm_hermitian_generator;
    use crate::phases::{geometric_phase, phase_distance};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    #[test]
    fn example_one_expectations() {
        let th = 0.8;
        let e = example_one(1.0, th, 1.0).unwrap().expected.unwrap();
        assert!((e.geometric - PI * (1.0 - th.cos())).abs() < 1e-15);
        let e = example_one(0.0, 1.3, 1.0).unwrap().expected.unwrap();
        assert!((e.geometric - PI).abs() < 1e-15);
        let e = example_one(0.5, FRAC_PI_3, 1.0).unwrap().expected.unwrap();
        assert!((e.geometric - 0.75 * PI).abs() < 1e-15);
        assert_eq!(
            example_one(1.5, 0.0, 1.0).unwrap_err(),
            Error::InvalidPurity(1.5)
        );
        assert!(example_one(0.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn example_two_expectations() {
        let (r, ph) = (0.6, 1.4);
        let e = example_two(r, FRAC_PI_2, ph, 1.0)
            .unwrap()
            .expected
            .unwrap();
        assert!((e.geometric + (r * (ph / 2.0).tan()).atan()).abs() < 1e-15);

        let (r, th) = (0.7, 1.1);
        let e = example_two(r, th, 2.0 * PI, 1.0).unwrap().expected.unwrap();
        assert!(phase_distance(e.geometric, PI * (1.0 + r * th.cos())) < 1e-14);

        let e = example_two(1.0, FRAC_PI_2, FRAC_PI_2, 1.0)
            .unwrap()
            .expected
            .unwrap();
        assert!((e.geometric + FRAC_PI_4).abs() < 1e-15);

        assert!(matches!(
            example_two(0.5, 0.0, 1.0, 1.0),
            Err(Error::InvalidAngle(_))
        ));
        assert!(matches!(
            example_two(0.5, 1.0, 7.0, 1.0),
            Err(Error::InvalidAngle(_))
        ));
        assert!(matches!(
            example_two(2.0, 1.0, 1.0, 1.0),
            Err(Error::InvalidPurity(_))
        ));
    }

    #[test]
    fn example_two_continuation_tracks_the_trace_argument() {
        for k in 1..40 {
            let ph = 2.0 * PI * k as f64 / 40.0;
            let r = 0.55;
            let e = example_two_closed_form(r, 1.0, ph);
            let z = C64::new((ph / 2.0).cos(), -r * (ph / 2.0).sin());
            assert!(phase_distance(e.total, z.arg()) < 1e-12, "phi = {ph}");
        }
    }

    #[test]
    fn example_two_final_unitary_matches_product_form() {
        for &(th, ph, om) in &[
            (1.0, 1.0, 1.0),
            (2.0, 5.5, 0.5),
            (FRAC_PI_2, FRAC_PI_2, 2.0),
        ] {
            let spec = example_two(0.5, th, ph, om).unwrap();
            let path = spec.propagate(32).unwrap();
            let (x, y, z) = (
                ComplexMatrix::pauli_x(),
                ComplexMatrix::pauli_y(),
                ComplexMatrix::pauli_z(),
            );
            let n = &x.scale_real(ph.sin()) - &y.scale_real(ph.cos());
            let a = expm_hermitian_generator(&n, -th / 2.0).unwrap();
            let b = expm_hermitian_generator(&z, -ph / 2.0).unwrap();
            let c = expm_hermitian_generator(&y, -th / 2.0).unwrap();
            let want = &(&a * &b) * &c;
            assert!((path.final_unitary() - &want).frobenius_norm() <= 1e-12);
        }
    }

    #[test]
    fn bloch_path_examples() {
        let r = 0.6;
        let flat = bloch_path(&example_one(r, 0.0, 1.0).unwrap(), 20).unwrap();
        for (_, b) in &flat {
            assert!(b.distance(&BlochVector([0.0, 0.0, r])) < 1e-14);
        }

        let (th, ph) = (1.1, 2.0);
        let spec = example_two(r, th, ph, 1.0).unwrap();
        let path = bloch_path(&spec, 101).unwrap();
        let start = BlochVector([0.0, 0.0, r]);
        assert!(path[0].1.distance(&start) < 1e-14);
        assert!(path[100].1.distance(&start) < 1e-9);
        for (_, b) in &path {
            assert!((b.norm() - r).abs() < 1e-10);
        }

        // at t1 the vector sits at B
        let t1 = th / 2.0;
        let u = spec.schedule.propagator_at(t1);
        let b = bloch_of(&spec.rho0.conjugate_by(&u)).unwrap();
        assert!(b.distance(&BlochVector([r * th.sin(), 0.0, r * th.cos()])) < 1e-14);
        // and at t2 at C
        let u = spec.schedule.propagator_at(t1 + ph / 2.0);
        let c = bloch_of(&spec.rho0.conjugate_by(&u)).unwrap();
        let want = BlochVector([
            r * th.sin() * ph.cos(),
            r * th.sin() * ph.sin(),
            r * th.cos(),
        ]);
        assert!(c.distance(&want) < 1e-14);

        let ends = bloch_path(&spec, 2).unwrap();
        assert_eq!(ends.len(), 2);
        assert_eq!(ends[0].0, 0.0);
        assert_eq!(ends[1].0, spec.schedule.duration());
        assert!(bloch_path(&spec, 1).is_err());
    }

    #[test]
    fn random_cyclic_scenarios_are_cyclic_and_non_nodal() {
        for seed in 0..50 {
            let spec = random_cyclic(2, seed).unwrap();
            let path = spec.propagate(64).unwrap();
            assert!(
                cyclicity_residual(&path, &spec.rho0).unwrap() < 1e-12,
                "seed {seed}"
            );
            let rep = geometric_phase(&spec.rho0, &path).unwrap();
            assert!(rep.trace_magnitude > 0.3);
        }
        let spec = random_cyclic(3, 1).unwrap();
        assert!(bloch_path(&spec, 4).is_err());
    }

    #[test]
    fn phases_do_not_depend_on_omega() {
        let (r, th) = (0.4, 1.2);
        let base = geometric_phase(
            &example_one(r, th, 1.0).unwrap().rho0,
            &example_one(r, th, 1.0).unwrap().propagate(256).unwrap(),
        )
        .unwrap();
        for om in [0.5, 2.0] {
            let spec = example_one(r, th, om).unwrap();
            let rep = geometric_phase(&spec.rho0, &spec.propagate(256).unwrap()).unwrap();
            assert!((rep.total - base.total).abs() <= 1e-10);
            assert!((rep.dynamical - base.dynamical).abs() <= 1e-10);
            assert!((rep.geometric - base.geometric).abs() <= 1e-10);
        }
    }
}
