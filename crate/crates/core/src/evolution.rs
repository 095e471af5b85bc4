//! Hamiltonian schedules and time-ordered propagators U(t) = T exp(−i∫H dt).
//!
//! A [`UnitaryPath`] is stored as a list of pieces, one per schedule segment,
//! each on its own uniform grid that includes both segment endpoints. Every
//! node carries U(t_n) and the generator H(t_n) as seen from inside its piece,
//! so derivatives U̇ = −iHU are always analytic and quadratures never straddle
//! a discontinuity of H.

use crate::matcore::{
    hermitian_eig_unchecked, principal_arg, ComplexMatrix, C64, HERMITIAN_TOL, I,
};
use crate::states::DensityOperator;
use crate::{Error, Result};

/// Default number of quadrature intervals per piecewise-constant segment.
pub const DEFAULT_SAMPLES_PER_SEGMENT: usize = 256;

/// Cyclicity tolerance for exactly propagated (piecewise-constant) paths.
pub const EXACT_CYCLICITY_TOL: f64 = 1e-9;
/// Cyclicity tolerance for paths stepped from a sampled schedule.
pub const SAMPLED_CYCLICITY_TOL: f64 = 1e-6;

const UNIFORM_GRID_TOL: f64 = 1e-12;

/// Constant-Hamiltonian stretch of a piecewise schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub duration: f64,
    pub h: ComplexMatrix,
}

impl Segment {
    pub fn new(duration: f64, h: ComplexMatrix) -> Self {
        Self { duration, h }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum ScheduleKind {
    PiecewiseConstant(Vec<Segment>),
    /// H sampled on the uniform grid t_n = n·τ/(len − 1).
    Sampled {
        tau: f64,
        h: Vec<ComplexMatrix>,
    },
}

/// Time-dependent Hermitian generator H(t) on [0, τ], in units with ħ = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSchedule {
    kind: ScheduleKind,
}

impl HamiltonianSchedule {
    pub fn piecewise(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSchedule("no segments".into()));
        }
        let dim = segments[0].h.dim();
        for (i, seg) in segments.iter().enumerate() {
            if !(seg.duration.is_finite() && seg.duration > 0.0) {
                return Err(Error::InvalidSchedule(format!(
                    "segment {i}: duration {} must be positive and finite",
                    seg.duration
                )));
            }
            check_generator(&seg.h, dim).map_err(|e| prefix(e, &format!("segment {i}")))?;
        }
        Ok(Self {
            kind: ScheduleKind::PiecewiseConstant(segments),
        })
    }

    /// Samples `h[n]` = H(n·τ/(len − 1)); at least three points.
    pub fn sampled(tau: f64, h: Vec<ComplexMatrix>) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidSchedule(format!(
                "tau {tau} must be positive and finite"
            )));
        }
        if h.len() < 3 {
            return Err(Error::InvalidSchedule(format!(
                "sampled schedule needs at least 3 points, got {}",
                h.len()
            )));
        }
        let dim = h[0].dim();
        for (i, m) in h.iter().enumerate() {
            check_generator(m, dim).map_err(|e| prefix(e, &format!("sample {i}")))?;
        }
        Ok(Self {
            kind: ScheduleKind::Sampled { tau, h },
        })
    }

    /// Sampled schedule from an explicit time grid, which must be uniform.
    pub fn sampled_on_grid(times: &[f64], h: Vec<ComplexMatrix>) -> Result<Self> {
        if times.len() != h.len() || times.len() < 3 {
            return Err(Error::InvalidSchedule(
                "grid and samples must have equal length of at least 3".into(),
            ));
        }
        if times[0].abs() > UNIFORM_GRID_TOL {
            return Err(Error::InvalidSchedule("grid must start at t = 0".into()));
        }
        let tau = *times.last().unwrap();
        let step = tau / (times.len() - 1) as f64;
        for (n, t) in times.iter().enumerate() {
            if (t - n as f64 * step).abs() > UNIFORM_GRID_TOL * tau.abs().max(1.0) {
                return Err(Error::InvalidSchedule(format!(
                    "grid point {n} breaks uniform spacing"
                )));
            }
        }
        Self::sampled(tau, h)
    }

    pub fn sampled_from_fn(
        tau: f64,
        points: usize,
        f: impl Fn(f64) -> ComplexMatrix,
    ) -> Result<Self> {
        let n = points.max(1) - 1;
        let h = (0..points).map(|k| f(tau * k as f64 / n as f64)).collect();
        Self::sampled(tau, h)
    }

    /// Everything identically zero on [0, τ].
    pub fn zero(dim: usize, tau: f64) -> Result<Self> {
        Self::piecewise(vec![Segment::new(tau, ComplexMatrix::zeros(dim))])
    }

    pub fn duration(&self) -> f64 {
        match &self.kind {
            ScheduleKind::PiecewiseConstant(segs) => segs.iter().map(|s| s.duration).sum(),
            ScheduleKind::Sampled { tau, .. } => *tau,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ScheduleKind::PiecewiseConstant(segs) => segs[0].h.dim(),
            ScheduleKind::Sampled { h, .. } => h[0].dim(),
        }
    }

    pub fn segments(&self) -> Option<&[Segment]> {
        match &self.kind {
            ScheduleKind::PiecewiseConstant(segs) => Some(segs),
            ScheduleKind::Sampled { .. } => None,
        }
    }

    /// `(tau, samples)` for a sampled schedule.
    pub fn samples(&self) -> Option<(f64, &[ComplexMatrix])> {
        match &self.kind {
            ScheduleKind::Sampled { tau, h } => Some((*tau, h)),
            ScheduleKind::PiecewiseConstant(_) => None,
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.kind, ScheduleKind::Sampled { .. })
    }

    /// Same schedule with every generator replaced by `f(h)`.
    pub fn map_generators(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        match &self.kind {
            ScheduleKind::PiecewiseConstant(segs) => Self::piecewise(
                segs.iter()
                    .map(|s| Segment::new(s.duration, f(&s.h)))
                    .collect(),
            ),
            ScheduleKind::Sampled { tau, h } => Self::sampled(*tau, h.iter().map(f).collect()),
        }
    }

    /// Split a piecewise schedule into the parts before and after `t`.
    pub fn split_at(&self, t: f64) -> Result<(Self, Self)> {
        let segs = self.segments().ok_or_else(|| {
            Error::InvalidSchedule("only piecewise-constant schedules can be split".into())
        })?;
        if !(t > 0.0 && t < self.duration()) {
            return Err(Error::InvalidSchedule(format!(
                "split time {t} outside (0, tau)"
            )));
        }
        let (mut head, mut tail) = (Vec::new(), Vec::new());
        let mut start = 0.0;
        for seg in segs {
            let end = start + seg.duration;
            if end <= t {
                head.push(seg.clone());
            } else if start >= t {
                tail.push(seg.clone());
            } else {
                head.push(Segment::new(t - start, seg.h.clone()));
                tail.push(Segment::new(end - t, seg.h.clone()));
            }
            start = end;
        }
        Ok((Self::piecewise(head)?, Self::piecewise(tail)?))
    }

    /// U(t) evaluated directly: exact for piecewise schedules, midpoint stepping
    /// along the sample grid for sampled ones (with linear interpolation of H
    /// inside the last partial step).
    pub fn propagator_at(&self, t: f64) -> ComplexMatrix {
        let t = t.clamp(0.0, self.duration());
        match &self.kind {
            ScheduleKind::PiecewiseConstant(segs) => {
                let mut u = ComplexMatrix::identity(self.dim());
                let mut start = 0.0;
                for seg in segs {
                    let dt = (t - start).min(seg.duration);
                    if dt <= 0.0 {
                        break;
                    }
                    u = &hermitian_eig_unchecked(&seg.h).exp_i(-dt) * &u;
                    start += seg.duration;
                }
                u
            }
            ScheduleKind::Sampled { tau, h } => {
                let step = tau / (h.len() - 1) as f64;
                let mut u = ComplexMatrix::identity(self.dim());
                for n in 0..h.len() - 1 {
                    let t0 = n as f64 * step;
                    if t <= t0 {
                        break;
                    }
                    let dt = (t - t0).min(step);
                    // H at the midpoint of [t0, t0 + dt], linearly interpolated
                    let a = 0.5 * dt / step;
                    let mid = &h[n].scale_real(1.0 - a) + &h[n + 1].scale_real(a);
                    u = &hermitian_eig_unchecked(&mid).exp_i(-dt) * &u;
                }
                u
            }
        }
    }
}

fn check_generator(h: &ComplexMatrix, dim: usize) -> Result<()> {
    if h.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: h.dim(),
        });
    }
    h.ensure_hermitian(HERMITIAN_TOL)
}

fn prefix(e: Error, ctx: &str) -> Error {
    Error::InvalidSchedule(format!("{ctx}: {e}"))
}

/// How a path's unitaries were obtained; selects the default cyclicity tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    Exact,
    Sampled,
}

impl PathKind {
    pub fn default_cyclicity_tol(self) -> f64 {
        match self {
            PathKind::Exact => EXACT_CYCLICITY_TOL,
            PathKind::Sampled => SAMPLED_CYCLICITY_TOL,
        }
    }
}

/// One segment of a [`UnitaryPath`] on a uniform grid including both endpoints.
#[derive(Debug, Clone)]
pub struct PathPiece {
    pub(crate) times: Vec<f64>,
    pub(crate) unitaries: Vec<ComplexMatrix>,
    pub(crate) generators: Vec<ComplexMatrix>,
    /// The generator is the same matrix at every node.
    pub(crate) constant: bool,
}

impl PathPiece {
    pub fn times(&self) -> &[f64] {
        &self.times
    }
    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }
    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }
    pub fn is_constant(&self) -> bool {
        self.constant
    }
    pub fn step(&self) -> f64 {
        (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
    }
    pub fn duration(&self) -> f64 {
        self.times[self.times.len() - 1] - self.times[0]
    }
}

/// Discretised propagator {t_n, U(t_n)} with U(0) = I and generator access.
#[derive(Debug, Clone)]
pub struct UnitaryPath {
    pieces: Vec<PathPiece>,
    kind: PathKind,
}

impl UnitaryPath {
    pub(crate) fn from_pieces(pieces: Vec<PathPiece>, kind: PathKind) -> Self {
        debug_assert!(!pieces.is_empty());
        Self { pieces, kind }
    }

    pub fn pieces(&self) -> &[PathPiece] {
        &self.pieces
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].unitaries[0].dim()
    }

    pub fn duration(&self) -> f64 {
        *self.pieces.last().unwrap().times.last().unwrap()
    }

    /// Number of distinct grid points (shared segment boundaries counted once).
    pub fn len(&self) -> usize {
        1 + self.pieces.iter().map(|p| p.times.len() - 1).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat index → (piece, node). Boundary points belong to the left piece.
    fn locate(&self, n: usize) -> Result<(usize, usize)> {
        if n == 0 {
            return Ok((0, 0));
        }
        let mut rest = n;
        for (p, piece) in self.pieces.iter().enumerate() {
            let intervals = piece.times.len() - 1;
            if rest <= intervals {
                return Ok((p, rest));
            }
            rest -= intervals;
        }
        Err(Error::IndexOutOfRange {
            index: n,
            len: self.len(),
        })
    }

    fn flat(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pieces.iter().enumerate().flat_map(|(p, piece)| {
            let skip = usize::from(p > 0);
            (skip..piece.times.len()).map(move |k| (p, k))
        })
    }

    pub fn times(&self) -> Vec<f64> {
        self.flat().map(|(p, k)| self.pieces[p].times[k]).collect()
    }

    pub fn unitaries(&self) -> Vec<&ComplexMatrix> {
        self.flat()
            .map(|(p, k)| &self.pieces[p].unitaries[k])
            .collect()
    }

    pub fn unitary(&self, n: usize) -> Result<&ComplexMatrix> {
        let (p, k) = self.locate(n)?;
        Ok(&self.pieces[p].unitaries[k])
    }

    /// H(t_n), taken from the left segment at a boundary.
    pub fn generator(&self, n: usize) -> Result<&ComplexMatrix> {
        let (p, k) = self.locate(n)?;
        Ok(&self.pieces[p].generators[k])
    }

    pub fn final_unitary(&self) -> &ComplexMatrix {
        self.pieces.last().unwrap().unitaries.last().unwrap()
    }

    /// max_n ‖U†U − I‖_F.
    pub fn max_unitarity_defect(&self) -> f64 {
        self.pieces
            .iter()
            .flat_map(|p| &p.unitaries)
            .map(ComplexMatrix::unitarity_defect)
            .fold(0.0, f64::max)
    }

    /// e^{iδ(t)}U(t) with generator H(t) − δ̇(t)I. `gauge(piece, node, t)` returns (δ, δ̇).
    pub(crate) fn with_scalar_gauge(
        &self,
        gauge: impl Fn(usize, usize, f64) -> (f64, f64),
    ) -> UnitaryPath {
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .map(|(p, piece)| {
                let mut unitaries = Vec::with_capacity(piece.times.len());
                let mut generators = Vec::with_capacity(piece.times.len());
                for (k, &t) in piece.times.iter().enumerate() {
                    let (delta, rate) = gauge(p, k, t);
                    unitaries.push(piece.unitaries[k].scale(C64::from_polar(1.0, delta)));
                    let shift = ComplexMatrix::identity(piece.unitaries[k].dim()).scale_real(rate);
                    generators.push(&piece.generators[k] - &shift);
                }
                PathPiece {
                    times: piece.times.clone(),
                    unitaries,
                    generators,
                    constant: false,
                }
            })
            .collect();
        UnitaryPath::from_pieces(pieces, self.kind)
    }

    /// Replace U(t) by e^{iδ(t)}U(t) for a smooth scalar gauge δ with derivative `rate`.
    pub fn regauged(&self, delta: impl Fn(f64) -> f64, rate: impl Fn(f64) -> f64) -> UnitaryPath {
        self.with_scalar_gauge(|_, _, t| (delta(t), rate(t)))
    }

    /// Apply `f` to every stored unitary and generator, keeping the grid.
    pub(crate) fn map_matrices(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> UnitaryPath {
        let pieces = self
            .pieces
            .iter()
            .map(|piece| PathPiece {
                times: piece.times.clone(),
                unitaries: piece.unitaries.iter().map(&f).collect(),
                generators: piece.generators.iter().map(&f).collect(),
                constant: piece.constant,
            })
            .collect();
        UnitaryPath::from_pieces(pieces, self.kind)
    }
}

/// Time-ordered propagator on the schedule's grid.
///
/// Piecewise-constant segments are exponentiated exactly at each of
/// `samples_per_segment` intervals (rounded up to an even count so Simpson's
/// rule applies). Sampled schedules are stepped with the midpoint exponential
/// U(t_{n+1}) = exp(−i·½(H_n + H_{n+1})·Δt)·U(t_n) on their own grid, and
/// `samples_per_segment` is ignored.
pub fn propagate(
    schedule: &HamiltonianSchedule,
    samples_per_segment: usize,
) -> Result<UnitaryPath> {
    if samples_per_segment < 2 {
        return Err(Error::InvalidSchedule(format!(
            "samples_per_segment must be at least 2, got {samples_per_segment}"
        )));
    }
    let dim = schedule.dim();
    match &schedule.kind {
        ScheduleKind::PiecewiseConstant(segs) => {
            let intervals = samples_per_segment + samples_per_segment % 2;
            let mut pieces = Vec::with_capacity(segs.len());
            let mut start_u = ComplexMatrix::identity(dim);
            let mut start_t = 0.0;
            for seg in segs {
                let eig = hermitian_eig_unchecked(&seg.h);
                let dt = seg.duration / intervals as f64;
                let mut times = Vec::with_capacity(intervals + 1);
                let mut unitaries = Vec::with_capacity(intervals + 1);
                for j in 0..=intervals {
                    let elapsed = if j == intervals {
                        seg.duration
                    } else {
                        j as f64 * dt
                    };
                    times.push(start_t + elapsed);
                    unitaries.push(if j == 0 {
                        start_u.clone()
                    } else {
                        &eig.exp_i(-elapsed) * &start_u
                    });
                }
                start_u = unitaries[intervals].clone();
                start_t += seg.duration;
                pieces.push(PathPiece {
                    times,
                    unitaries,
                    generators: vec![seg.h.clone(); intervals + 1],
                    constant: true,
                });
            }
            Ok(UnitaryPath::from_pieces(pieces, PathKind::Exact))
        }
        ScheduleKind::Sampled { tau, h } => {
            let n = h.len() - 1;
            let step = tau / n as f64;
            let times: Vec<f64> = (0..=n)
                .map(|k| if k == n { *tau } else { k as f64 * step })
                .collect();
            let mut unitaries = Vec::with_capacity(n + 1);
            unitaries.push(ComplexMatrix::identity(dim));
            for k in 0..n {
                let mid = (&h[k] + &h[k + 1]).scale_real(0.5);
                let next = &hermitian_eig_unchecked(&mid).exp_i(-step) * &unitaries[k];
                unitaries.push(next);
            }
            let piece = PathPiece {
                times,
                unitaries,
                generators: h.clone(),
                constant: false,
            };
            Ok(UnitaryPath::from_pieces(vec![piece], PathKind::Sampled))
        }
    }
}

/// U̇(t_n) = −iH(t_n)U(t_n).
pub fn derivative_at(path: &UnitaryPath, n: usize) -> Result<ComplexMatrix> {
    let (p, k) = path.locate(n)?;
    let piece = &path.pieces[p];
    Ok((&piece.generators[k] * &piece.unitaries[k]).scale(-I))
}

/// ‖U(τ)ρ(0)U†(τ) − ρ(0)‖_F.
pub fn cyclicity_residual(path: &UnitaryPath, rho0: &DensityOperator) -> Result<f64> {
    if path.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch {
            expected: path.dim(),
            found: rho0.dim(),
        });
    }
    let evolved = rho0.conjugate_by(path.final_unitary());
    Ok((evolved.matrix() - rho0.matrix()).frobenius_norm())
}

/// `Some(φ̂)` when ‖U(τ) − e^{iφ̂}I‖_F ≤ 1e−9 with φ̂ = arg U(τ)[0,0].
pub fn is_global_cyclic(path: &UnitaryPath) -> Option<f64> {
    let u = path.final_unitary();
    let phase = principal_arg(u.get(0, 0));
    let scalar = ComplexMatrix::identity(u.dim()).scale(C64::from_polar(1.0, phase));
    ((u - &scalar).frobenius_norm() <= EXACT_CYCLICITY_TOL).then_some(phase)
}
