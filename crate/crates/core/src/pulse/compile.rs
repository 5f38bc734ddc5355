//! Gate to pulse compilation.
//!
//! A rectangular pulse of length `τ` excites lines within `carrier ± Δω`,
//! `Δω = κ/τ`. One-spin rotations sit between the two lines of a spin's
//! doublet and must cover both while missing the other spin; CNOTs sit on a
//! single line and must resolve the doublet spacing `2ωc`.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::system::{transition_line, SpinSystem, TransitionLine};
use crate::error::{Error, Result};
use crate::gates::{Axis, ControlCondition, Gate};

/// Rectangular pulse in the lab frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pulse {
    /// Carrier angular frequency (rad/s).
    pub carrier: f64,
    /// Drive strength `ωp` (rad/s).
    pub amplitude: f64,
    /// Duration `τ` (s).
    pub duration: f64,
    /// Rotation-axis phase in the rotating plane (rad); 0 is x', π/2 is y'.
    pub phase: f64,
}

impl Pulse {
    pub fn new(carrier: f64, amplitude: f64, duration: f64, phase: f64) -> Result<Self> {
        if ![carrier, amplitude, duration, phase].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("pulse"));
        }
        if duration <= 0.0 || amplitude <= 0.0 {
            return Err(Error::invalid(format!(
                "pulse needs tau > 0 and omega_p > 0 (tau = {duration}, omega_p = {amplitude})"
            )));
        }
        Ok(Pulse {
            carrier,
            amplitude,
            duration,
            phase,
        })
    }

    /// Rotation angle `θ = ωp τ / 2` realized on resonance.
    pub fn rotation_angle(&self) -> f64 {
        self.amplitude * self.duration / 2.0
    }
}

/// Time needed to rotate by `theta` at drive strength `omega_p`.
pub fn rotation_duration(theta: f64, omega_p: f64) -> f64 {
    2.0 * theta / omega_p
}

/// Excitation band of a rectangular pulse: half-width `Δω = κ/τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandwidthModel {
    pub kappa: f64,
}

impl Default for BandwidthModel {
    /// `κ = π`, the half-width of the main lobe of a rectangular pulse.
    fn default() -> Self {
        BandwidthModel { kappa: PI }
    }
}

impl BandwidthModel {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::invalid(format!("kappa = {kappa} must be positive")));
        }
        Ok(BandwidthModel { kappa })
    }

    pub fn half_width(&self, duration: f64) -> f64 {
        self.kappa / duration
    }

    pub fn duration_for(&self, half_width: f64) -> f64 {
        self.kappa / half_width
    }
}

/// Compiles gates for one spin system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseCompiler {
    pub system: SpinSystem,
    pub bandwidth: BandwidthModel,
}

impl PulseCompiler {
    pub fn new(system: SpinSystem, bandwidth: BandwidthModel) -> Self {
        PulseCompiler { system, bandwidth }
    }

    /// Open interval of admissible half-widths for a one-spin rotation:
    /// `(ωc, ω1 - ω2 - ωc)`.
    pub fn rotation_window(&self) -> Result<(f64, f64)> {
        let sys = &self.system;
        let lower = sys.omegac();
        let upper = sys.omega1() - sys.omega2() - sys.omegac();
        // Equality within rounding counts as a violation.
        if upper - lower <= 1e-12 * sys.omega1() {
            return Err(Error::Feasibility {
                bound: "condition 1: omega1 - omega2 > 2 omegac".into(),
                detail: format!(
                    "omega1 - omega2 = {} leaves no band covering one doublet while missing the other",
                    sys.omega1() - sys.omega2()
                ),
            });
        }
        Ok((lower, upper))
    }

    /// Rotation by `theta` about the axis at `axis_phase` on `spin`, with the
    /// half-width at the geometric centre of the feasible window.
    pub fn compile_rotation(&self, spin: usize, axis_phase: f64, theta: f64) -> Result<Pulse> {
        let (lower, upper) = self.rotation_window()?;
        self.compile_rotation_with_bandwidth(spin, axis_phase, theta, (lower * upper).sqrt())
    }

    pub fn compile_rotation_with_bandwidth(
        &self,
        spin: usize,
        axis_phase: f64,
        theta: f64,
        half_width: f64,
    ) -> Result<Pulse> {
        check_spin(spin)?;
        if !(theta > 0.0 && theta <= TAU) {
            return Err(Error::invalid(format!("rotation angle {theta} outside (0, 2π]")));
        }
        let (lower, upper) = self.rotation_window()?;
        if half_width <= lower {
            return Err(Error::Feasibility {
                bound: "condition 1 lower bound: delta_omega > omegac".into(),
                detail: format!(
                    "band half-width {half_width} does not cover both lines of spin {spin} (omegac = {lower})"
                ),
            });
        }
        if half_width >= upper {
            return Err(Error::Feasibility {
                bound: "condition 1 upper bound: delta_omega < omega1 - omega2 - omegac".into(),
                detail: format!(
                    "band half-width {half_width} reaches the other spin's lines (limit {upper})"
                ),
            });
        }
        let duration = self.bandwidth.duration_for(half_width);
        let amplitude = 2.0 * theta / duration;
        Pulse::new(self.system.big_omega(spin), amplitude, duration, axis_phase)
    }

    /// Line addressed by `C^target_{control, condition}`.
    pub fn cnot_line(
        &self,
        target: usize,
        control: usize,
        condition: ControlCondition,
    ) -> Result<TransitionLine> {
        check_spin(target)?;
        check_spin(control)?;
        if target == control {
            return Err(Error::invalid("CNOT control equals target"));
        }
        Ok(transition_line(&self.system, target, condition.sign()))
    }

    /// Selective π-pulse on one line. The strength `ωp = 2ωc/√3` makes the
    /// neighbouring line of the doublet (detuned by `2ωc`) complete a full
    /// generalized Rabi cycle, so it ends with no population transfer.
    pub fn compile_cnot(
        &self,
        target: usize,
        control: usize,
        condition: ControlCondition,
    ) -> Result<Pulse> {
        let amplitude = 2.0 * self.system.omegac() / 3f64.sqrt();
        let duration = PI / amplitude;
        self.compile_cnot_with_bandwidth(
            target,
            control,
            condition,
            self.bandwidth.half_width(duration),
        )
    }

    pub fn compile_cnot_with_bandwidth(
        &self,
        target: usize,
        control: usize,
        condition: ControlCondition,
        half_width: f64,
    ) -> Result<Pulse> {
        let line = self.cnot_line(target, control, condition)?;
        let limit = 2.0 * self.system.omegac();
        if !(half_width > 0.0 && half_width < limit) {
            return Err(Error::Feasibility {
                bound: "condition 2: delta_omega < 2 omegac".into(),
                detail: format!(
                    "band half-width {half_width} does not resolve the doublet spacing {limit}"
                ),
            });
        }
        let duration = self.bandwidth.duration_for(half_width);
        // ωp τ / 2 = π/2
        let amplitude = PI / duration;
        Pulse::new(line.frequency, amplitude, duration, 0.0)
    }

    /// Pulse for a symbolic gate, or `None` for a rotation that is the identity.
    pub fn compile_gate(&self, gate: &Gate) -> Result<Option<Pulse>> {
        match *gate {
            Gate::Rotation { axis: Axis::Z, .. } => Err(Error::Compilation {
                gate: gate.name(),
                reason: "z rotations come from free evolution, not from a resonant pulse".into(),
            }),
            Gate::Rotation { axis, spin, angle } => {
                let base = if axis == Axis::X { 0.0 } else { PI / 2.0 };
                // R_n(θ + 2π) = R_n(θ) and R_n(θ) = R_{-n}(2π - θ)
                let theta = angle.rem_euclid(TAU);
                if theta == 0.0 {
                    return Ok(None);
                }
                let (phase, theta) = if theta > PI { (base + PI, TAU - theta) } else { (base, theta) };
                self.compile_rotation(spin, phase, theta).map(Some)
            }
            Gate::Cnot {
                target,
                control,
                condition,
            } => self.compile_cnot(target, control, condition).map(Some),
            Gate::NotAll | Gate::BellReadout | Gate::Qft => Err(Error::Compilation {
                gate: gate.name(),
                reason: "only rx, ry and cnot map to single pulses; decompose first".into(),
            }),
        }
    }
}

fn check_spin(spin: usize) -> Result<()> {
    if spin == 1 || spin == 2 {
        Ok(())
    } else {
        Err(Error::invalid(format!("the pulse layer has spins 1 and 2, got {spin}")))
    }
}
