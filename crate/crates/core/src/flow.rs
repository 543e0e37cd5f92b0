//! The geodesic flow of Sol as a Hamiltonian system on the cotangent bundle.
//!
//! With `H(q, p) = (e^{2z} p_x^2 + e^{-2z} p_y^2 + p_z^2) / 2` the equations
//! of motion are
//!
//! ```text
//! ẋ = e^{2z} p_x    ṗ_x = 0
//! ẏ = e^{-2z} p_y   ṗ_y = 0
//! ż = p_z           ṗ_z = -e^{2z} p_x^2 + e^{-2z} p_y^2
//! ```
//!
//! `p_x` and `p_y` are cyclic and held exactly constant; only
//! `(x, y, z, p_z)` is integrated. Geodesics fall into three families:
//! type A (straight lines in the `±45°` frame directions `f_1`, `f_2`),
//! type B (contained in the totally geodesic hyperbolic leaves `{dy = 0}`,
//! `{dx = 0}`, including vertical lines), and type C (the rest, winding
//! around a type-A axis with bounded `z`).

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Result, SolError};
use crate::math;
use crate::ode::{self, OdeOptions};
use crate::sol::{self, SolElement};

/// Classification tolerance on unit-speed states.
pub const CLASSIFY_TOL: f64 = 1e-10;

/// A point of the cotangent bundle carrying the geodesic flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub position: SolElement,
    pub momentum: [f64; 3],
}

impl PhaseState {
    pub fn new(position: SolElement, momentum: [f64; 3]) -> PhaseState {
        PhaseState { position, momentum }
    }

    /// The Hamiltonian `H = |p|^2 / 2`; unit-speed states have `H = 1/2`.
    pub fn energy(&self) -> Result<f64> {
        let z = self.position.z;
        if math::abs(z) > math::EXP_ARG_LIMIT {
            return Err(SolError::ExponentOverflow);
        }
        let [px, py, pz] = self.momentum;
        Ok(0.5 * (math::exp(2.0 * z) * px * px + math::exp(-2.0 * z) * py * py + pz * pz))
    }

    /// Rescale the momentum to unit speed.
    pub fn normalize(&self) -> Result<PhaseState> {
        let h = self.energy()?;
        if h <= 0.0 {
            return Err(SolError::InvalidInput(String::from("zero momentum cannot be normalized")));
        }
        let s = 1.0 / math::sqrt(2.0 * h);
        Ok(PhaseState::new(
            self.position,
            [self.momentum[0] * s, self.momentum[1] * s, self.momentum[2] * s],
        ))
    }

    pub fn is_unit(&self, tol: f64) -> Result<bool> {
        Ok(math::abs(2.0 * self.energy()? - 1.0) <= tol)
    }

    /// Coordinate velocity `♯p` at the base point.
    pub fn velocity(&self) -> Result<[f64; 3]> {
        let v = sol::sharp(sol::CotangentVector::new(self.position, self.momentum))?;
        Ok(v.components)
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite() && self.momentum.iter().all(|c| c.is_finite())
    }
}

/// Branch of a type-A geodesic: the frame direction it follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ABranch {
    /// `f_1 = (X - Y)/√2`
    F1,
    /// `f_2 = (X + Y)/√2`
    F2,
}

/// Totally geodesic hyperbolic leaf carrying a type-B geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BLeaf {
    /// `{dy = 0}`
    HPrime,
    /// `{dx = 0}`
    HSecond,
    /// Intersection of both: vertical geodesics directed by `e_3`.
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicType {
    A(ABranch),
    B(BLeaf),
    C,
}

/// Result of classifying a unit-speed state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub kind: GeodesicType,
    /// Set when the state sits within two orders of magnitude of the A or B
    /// thresholds without meeting them; such states are classified C.
    pub near_threshold: bool,
}

/// Classify a unit-speed state into the A/B/C families.
///
/// Type A requires `p_z = 0` and `e^{2z} p_x^2 = e^{-2z} p_y^2` (both to
/// [`CLASSIFY_TOL`]); type B requires `p_x = 0` or `p_y = 0`; everything else
/// is type C.
pub fn classify(state: &PhaseState) -> Result<Classification> {
    let h = state.energy()?;
    if math::abs(2.0 * h - 1.0) > 1e-9 {
        return Err(SolError::NormalizeFirst { energy: h });
    }
    let [px, py, pz] = state.momentum;
    let z = state.position.z;
    let balance = math::exp(2.0 * z) * px * px - math::exp(-2.0 * z) * py * py;

    let a_cond = math::abs(pz) <= CLASSIFY_TOL && math::abs(balance) <= CLASSIFY_TOL;
    if a_cond {
        let branch = if px * py > 0.0 { ABranch::F2 } else { ABranch::F1 };
        return Ok(Classification { kind: GeodesicType::A(branch), near_threshold: false });
    }
    let bx = math::abs(px) <= CLASSIFY_TOL;
    let by = math::abs(py) <= CLASSIFY_TOL;
    if bx || by {
        let leaf = if bx && by {
            BLeaf::Vertical
        } else if by {
            BLeaf::HPrime
        } else {
            BLeaf::HSecond
        };
        return Ok(Classification { kind: GeodesicType::B(leaf), near_threshold: false });
    }
    let near = 100.0 * CLASSIFY_TOL;
    let near_threshold = (math::abs(pz) <= near && math::abs(balance) <= near)
        || math::abs(px) <= near
        || math::abs(py) <= near;
    Ok(Classification { kind: GeodesicType::C, near_threshold })
}

pub(crate) fn rhs_reduced(px: f64, py: f64, y: &[f64; 4]) -> Result<[f64; 4]> {
    let z = y[2];
    if math::abs(z) > math::EXP_ARG_LIMIT {
        return Err(SolError::ExponentOverflow);
    }
    let e2 = math::exp(2.0 * z);
    let em2 = math::exp(-2.0 * z);
    Ok([e2 * px, em2 * py, y[3], -e2 * px * px + em2 * py * py])
}

/// Trajectory of the geodesic flow: dense solution of the reduced system
/// with the conserved momenta attached.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub px: f64,
    pub py: f64,
    sol: ode::Solution<4>,
}

impl Trajectory {
    fn to_state(&self, y: &[f64; 4]) -> PhaseState {
        PhaseState::new(SolElement::new(y[0], y[1], y[2]), [self.px, self.py, y[3]])
    }

    /// Times of the accepted integration steps.
    pub fn times(&self) -> &[f64] {
        &self.sol.ts
    }

    /// State at an accepted step.
    pub fn step_state(&self, i: usize) -> PhaseState {
        self.to_state(&self.sol.ys[i])
    }

    /// Dense evaluation at an arbitrary time inside the span.
    pub fn state_at(&self, t: f64) -> PhaseState {
        self.to_state(&self.sol.eval(t))
    }

    pub fn end_state(&self) -> PhaseState {
        self.to_state(&self.sol.end_state())
    }

    /// The accepted steps as `(t, state)` samples.
    pub fn steps(&self) -> Vec<(f64, PhaseState)> {
        self.sol.ts.iter().zip(self.sol.ys.iter()).map(|(&t, y)| (t, self.to_state(y))).collect()
    }

    /// `n + 1` uniform samples across the whole span.
    pub fn sample(&self, n: usize) -> Vec<(f64, PhaseState)> {
        let t0 = self.sol.ts[0];
        let t1 = self.sol.end_time();
        (0..=n)
            .map(|k| {
                let t = t0 + (t1 - t0) * k as f64 / n.max(1) as f64;
                (t, self.state_at(t))
            })
            .collect()
    }

    pub(crate) fn solution(&self) -> &ode::Solution<4> {
        &self.sol
    }
}

/// Integrate the geodesic flow for time `T` (may be negative).
///
/// `p_x`, `p_y` are enforced exactly constant. The energy drift over the run
/// is verified against `tol·(1 + |T|)`; the internal tolerance is tightened
/// and the integration retried if the first pass misses it.
pub fn flow(state: &PhaseState, t_end: f64, tol: f64) -> Result<Trajectory> {
    if !(tol > 0.0) {
        return Err(SolError::InvalidInput(String::from("tolerance must be positive")));
    }
    if !state.is_finite() {
        return Err(SolError::InvalidInput(String::from("state must be finite")));
    }
    let [px, py, pz] = state.momentum;
    let y0 = [state.position.x, state.position.y, state.position.z, pz];
    let h0 = state.energy()?;
    let budget = tol * (1.0 + math::abs(t_end));

    let mut local = (0.05 * budget).clamp(1e-14, 1e-6);
    let mut last_err = None;
    for _ in 0..4 {
        let sol = ode::integrate(
            |_t, y: &[f64; 4]| rhs_reduced(px, py, y),
            0.0,
            y0,
            t_end,
            &OdeOptions::with_tol(local),
        )?;
        let traj = Trajectory { px, py, sol };
        let drift = energy_drift(&traj, h0)?;
        if drift < budget {
            return Ok(traj);
        }
        last_err = Some(drift);
        local *= 1e-2;
        if local < 1e-15 {
            break;
        }
    }
    Err(SolError::Numerical(alloc::format!(
        "energy drift {:?} exceeds budget {budget}",
        last_err
    )))
}

fn energy_drift(traj: &Trajectory, h0: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..traj.times().len() {
        let h = traj.step_state(i).energy()?;
        worst = worst.max(math::abs(h - h0));
    }
    Ok(worst)
}

/// Detect the `z`-oscillation period of a type-C trajectory by sign-change
/// bisection on `ż = p_z`: the time between the first and third zero of
/// `p_z` is one full period.
pub fn type_c_period(state: &PhaseState, tol: f64) -> Result<f64> {
    let cls = classify(&state.normalize()?)?;
    if cls.kind != GeodesicType::C {
        return Err(SolError::InvalidInput(String::from("period detection expects a type-C state")));
    }
    let mut crossings = Vec::new();
    let mut start = *state;
    let mut t_offset = 0.0;
    let chunk = 50.0;
    for _ in 0..40 {
        let traj = flow(&start, chunk, tol)?;
        let ts = traj.times();
        for i in 1..ts.len() {
            let a = traj.step_state(i - 1).momentum[2];
            let b = traj.step_state(i).momentum[2];
            if a == 0.0 || (a > 0.0) != (b > 0.0) {
                let t = traj.solution().refine_root(ts[i - 1], ts[i], |_t, y| y[3]);
                crossings.push(t_offset + t);
                if crossings.len() == 3 {
                    return Ok(crossings[2] - crossings[0]);
                }
            }
        }
        t_offset += chunk;
        start = traj.end_state();
    }
    Err(SolError::Numerical(String::from("no z-oscillation period detected")))
}

/// A geodesic family with a closed-form parametrization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactGeodesic {
    /// `γ(t) = γ_0 + t · dir · f_branch(γ_0)` (coordinate translation).
    TypeA { base: SolElement, branch: ABranch, direction: f64 },
    /// `γ(t) = γ_0 + t · dir · e_3`.
    VerticalB { base: SolElement, direction: f64 },
    /// Geodesic of the leaf `{dy = 0}` through `base`:
    /// `γ_a(t) = a sinh t / (cosh t - c_0 sinh t) e_1 - ln(cosh t - c_0 sinh t) e_3`,
    /// left-translated by `base`; requires `a^2 + c_0^2 = 1`.
    LeafHPrime { base: SolElement, a: f64, c0: f64 },
    /// Mirror family in the leaf `{dx = 0}`:
    /// `γ_b(t) = b sinh t / (cosh t + c_0 sinh t) e_2 + ln(cosh t + c_0 sinh t) e_3`.
    LeafHSecond { base: SolElement, b: f64, c0: f64 },
}

impl ExactGeodesic {
    fn check_unit(radial: f64, c0: f64) -> Result<()> {
        if math::abs(radial * radial + c0 * c0 - 1.0) > 1e-9 {
            return Err(SolError::InvalidInput(String::from(
                "leaf geodesic parameters must satisfy a^2 + c0^2 = 1",
            )));
        }
        Ok(())
    }

    pub fn leaf_h_prime(base: SolElement, a: f64, c0: f64) -> Result<ExactGeodesic> {
        Self::check_unit(a, c0)?;
        Ok(ExactGeodesic::LeafHPrime { base, a, c0 })
    }

    pub fn leaf_h_second(base: SolElement, b: f64, c0: f64) -> Result<ExactGeodesic> {
        Self::check_unit(b, c0)?;
        Ok(ExactGeodesic::LeafHSecond { base, b, c0 })
    }

    /// Position at parameter `t`.
    pub fn position(&self, t: f64) -> Result<SolElement> {
        match *self {
            ExactGeodesic::TypeA { base, branch, direction } => {
                let f = match branch {
                    ABranch::F1 => sol::f1_at(base)?,
                    ABranch::F2 => sol::f2_at(base)?,
                };
                Ok(SolElement::new(
                    base.x + t * direction * f[0],
                    base.y + t * direction * f[1],
                    base.z + t * direction * f[2],
                ))
            }
            ExactGeodesic::VerticalB { base, direction } => {
                Ok(SolElement::new(base.x, base.y, base.z + t * direction))
            }
            ExactGeodesic::LeafHPrime { base, a, c0 } => {
                let d = math::cosh(t) - c0 * math::sinh(t);
                if d <= 0.0 {
                    return Err(SolError::LeftChart);
                }
                let rel = SolElement::new(a * math::sinh(t) / d, 0.0, -math::ln(d));
                sol::sol_mul(base, rel)
            }
            ExactGeodesic::LeafHSecond { base, b, c0 } => {
                let d = math::cosh(t) + c0 * math::sinh(t);
                if d <= 0.0 {
                    return Err(SolError::LeftChart);
                }
                let rel = SolElement::new(0.0, b * math::sinh(t) / d, math::ln(d));
                sol::sol_mul(base, rel)
            }
        }
    }

    /// Coordinate velocity at parameter `t`.
    pub fn velocity(&self, t: f64) -> Result<[f64; 3]> {
        match *self {
            ExactGeodesic::TypeA { base, branch, direction } => {
                let f = match branch {
                    ABranch::F1 => sol::f1_at(base)?,
                    ABranch::F2 => sol::f2_at(base)?,
                };
                Ok([direction * f[0], direction * f[1], direction * f[2]])
            }
            ExactGeodesic::VerticalB { direction, .. } => Ok([0.0, 0.0, direction]),
            ExactGeodesic::LeafHPrime { base, a, c0 } => {
                let d = math::cosh(t) - c0 * math::sinh(t);
                if d <= 0.0 {
                    return Err(SolError::LeftChart);
                }
                let dp = math::sinh(t) - c0 * math::cosh(t);
                let scale = sol::left_translation_differential(base)?;
                Ok([scale[0] * a / (d * d), 0.0, -dp / d])
            }
            ExactGeodesic::LeafHSecond { base, b, c0 } => {
                let d = math::cosh(t) + c0 * math::sinh(t);
                if d <= 0.0 {
                    return Err(SolError::LeftChart);
                }
                let dp = math::sinh(t) + c0 * math::cosh(t);
                let scale = sol::left_translation_differential(base)?;
                Ok([0.0, scale[1] * b / (d * d), dp / d])
            }
        }
    }

    /// Phase-space state at parameter `t` (momentum = `♭` of the velocity).
    pub fn state(&self, t: f64) -> Result<PhaseState> {
        let q = self.position(t)?;
        let v = self.velocity(t)?;
        let p = sol::flat(sol::TangentVector::new(q, v))?;
        Ok(PhaseState::new(q, p.components))
    }
}
