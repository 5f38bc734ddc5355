//! Time evolution under the static Hamiltonian and under resonant pulses.
//!
//! The drive is a circularly polarized field turning with the spins' Larmor
//! precession. Acting on spin `k` it reads
//! `-(ωp/2)[e^{i(ωt - φ)} |+><-|_k + h.c.]`, which in a frame rotating at the
//! carrier `ω` becomes the static `-(ωp/2)(cos φ σx + sin φ σy)`.
//!
//! Pulses are integrated in the interaction frame with the exponential
//! midpoint rule: each step applies `exp(-i H(t_mid) dt)`, which is unitary
//! by construction. The step count doubles until two successive refinements
//! agree to `CONVERGENCE_TOL`.

use super::compile::Pulse;
use super::system::{Frame, SpinSystem};
use crate::error::{Error, Result};
use crate::linalg::{expm_hermitian_generator, Complex, ComplexMatrix, ZERO};
use crate::register::QuantumState;

/// Max-norm agreement required between two successive step refinements.
pub const CONVERGENCE_TOL: f64 = 1e-8;

/// Allowed drift of a single step propagator from unitarity.
pub const NORM_TOL: f64 = 1e-10;

/// Allowed drift of a whole pulse propagator from unitarity.
pub const PULSE_NORM_TOL: f64 = 1e-9;

const MAX_STEPS: usize = 1 << 22;

/// Which spins the pulse field couples to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveScope {
    /// Only the given spin feels the drive.
    SingleSpin(usize),
    /// The field acts on both spins; selectivity comes from detuning alone.
    BothSpins,
}

fn diag_phases(energies: &[f64], t: f64, sign: f64) -> Vec<Complex> {
    energies
        .iter()
        .map(|&e| Complex::from_polar(1.0, sign * e * t))
        .collect()
}

/// Diagonal generator of the map from `frame` to the lab: `ψ_lab = exp(-i g t) ψ_frame`.
fn frame_generator(sys: &SpinSystem, n: usize, frame: Frame) -> Result<Vec<f64>> {
    let lab = sys.energies(n, Frame::Lab)?;
    Ok(match frame {
        Frame::Lab => vec![0.0; lab.len()],
        Frame::Rotating => {
            let rot = sys.energies(n, Frame::Rotating)?;
            lab.iter().zip(rot).map(|(l, r)| l - r).collect()
        }
        Frame::Interaction => lab,
    })
}

fn check_pulse_register(state: &QuantumState) -> Result<()> {
    if state.n() > 2 {
        return Err(Error::invalid(format!(
            "the pulse layer handles 1 or 2 spins, got {}",
            state.n()
        )));
    }
    Ok(())
}

/// Re-expresses a state at time `t` from one frame in another.
pub fn change_frame(
    sys: &SpinSystem,
    state: &QuantumState,
    t: f64,
    from: Frame,
    to: Frame,
) -> Result<QuantumState> {
    check_pulse_register(state)?;
    let g_from = frame_generator(sys, state.n(), from)?;
    let g_to = frame_generator(sys, state.n(), to)?;
    let delta: Vec<f64> = g_from.iter().zip(&g_to).map(|(a, b)| a - b).collect();
    let u = ComplexMatrix::diagonal(&diag_phases(&delta, t, -1.0));
    state.apply(&u)
}

/// Free evolution `exp(-i H0 t)` with the static Hamiltonian of `frame`.
/// In the interaction frame nothing moves.
pub fn evolve_free(sys: &SpinSystem, state: &QuantumState, t: f64, frame: Frame) -> Result<QuantumState> {
    check_pulse_register(state)?;
    if t < 0.0 {
        return Err(Error::invalid(format!("evolution time {t} is negative")));
    }
    let e = sys.energies(state.n(), frame)?;
    let h = ComplexMatrix::diagonal(&e.iter().map(|&x| Complex::new(x, 0.0)).collect::<Vec<_>>());
    state.apply(&expm_hermitian_generator(&h, t)?)
}

/// Exact free propagator of `frame` over `t` (diagonal).
pub fn free_propagator(sys: &SpinSystem, n: usize, t: f64, frame: Frame) -> Result<ComplexMatrix> {
    let e = sys.energies(n, frame)?;
    Ok(ComplexMatrix::diagonal(&diag_phases(&e, t, -1.0)))
}

/// A drive matrix element `(upper-left |i><j|)` in the interaction frame:
/// `-(ωp/2) e^{i(δ t - φ)}` with detuning `δ = carrier - line`.
#[derive(Debug, Clone, Copy)]
struct Coupling {
    row: usize,
    col: usize,
    detuning: f64,
}

fn couplings(sys: &SpinSystem, n: usize, pulse: &Pulse, scope: DriveScope) -> Result<Vec<Coupling>> {
    let driven: Vec<usize> = match scope {
        DriveScope::SingleSpin(s) if (1..=n).contains(&s) => vec![s],
        DriveScope::SingleSpin(s) => {
            return Err(Error::invalid(format!("driven spin {s} outside 1..={n}")))
        }
        DriveScope::BothSpins => (1..=n).collect(),
    };
    let lab = sys.energies(n, Frame::Lab)?;
    let mut out = Vec::new();
    for spin in driven {
        let bit = 1 << (spin - 1);
        for i in (0..1 << n).filter(|i| i & bit == 0) {
            let j = i | bit;
            out.push(Coupling {
                row: i,
                col: j,
                detuning: pulse.carrier - (lab[j] - lab[i]),
            });
        }
    }
    Ok(out)
}

fn drive_hamiltonian(dim: usize, couplings: &[Coupling], pulse: &Pulse, t: f64) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(dim, dim);
    let half = -0.5 * pulse.amplitude;
    for c in couplings {
        let z = Complex::from_polar(half, c.detuning * t - pulse.phase);
        h.set(c.row, c.col, z);
        h.set(c.col, c.row, z.conj());
    }
    h
}

fn midpoint_propagator(
    dim: usize,
    couplings: &[Coupling],
    pulse: &Pulse,
    steps: usize,
) -> Result<ComplexMatrix> {
    let dt = pulse.duration / steps as f64;
    let mut u = ComplexMatrix::identity(dim);
    for k in 0..steps {
        let t_mid = (k as f64 + 0.5) * dt;
        let h = drive_hamiltonian(dim, couplings, pulse, t_mid);
        let step = expm_hermitian_generator(&h, dt)?;
        let drift = unitarity_drift(&step)?;
        if drift > NORM_TOL {
            return Err(Error::Integration(format!(
                "step {k} drifted from unitarity by {drift:.3e}"
            )));
        }
        u = step.matmul(&u)?;
    }
    Ok(u)
}

fn unitarity_drift(u: &ComplexMatrix) -> Result<f64> {
    u.adjoint()
        .matmul(u)?
        .max_abs_diff(&ComplexMatrix::identity(u.rows()))
}

/// Result of integrating one pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    /// Interaction-frame propagator over the pulse.
    pub propagator: ComplexMatrix,
    /// Midpoint steps used for the accepted refinement.
    pub steps: usize,
    /// Max-norm change between the last two refinements.
    pub refinement_delta: f64,
}

/// Interaction-frame propagator of `pulse` on an `n`-spin register (1 or 2).
pub fn pulse_propagator(
    sys: &SpinSystem,
    n: usize,
    pulse: &Pulse,
    scope: DriveScope,
) -> Result<Propagation> {
    if n == 0 || n > 2 {
        return Err(Error::invalid(format!("the pulse layer handles 1 or 2 spins, got {n}")));
    }
    let couplings = couplings(sys, n, pulse, scope)?;
    let dim = 1 << n;
    // Start with a quarter radian of phase per step at the fastest rate.
    let rate = couplings
        .iter()
        .map(|c| c.detuning.abs())
        .fold(0.0, f64::max)
        + pulse.amplitude;
    let initial = (pulse.duration * rate / 0.25).ceil();
    if initial.is_nan() || initial >= (MAX_STEPS / 2) as f64 {
        return Err(Error::Integration(format!(
            "step size underflow: pulse tau = {} at rate {rate} rad/s needs more than {MAX_STEPS} steps",
            pulse.duration
        )));
    }
    let mut steps = (initial as usize).max(8);
    let mut coarse = midpoint_propagator(dim, &couplings, pulse, steps)?;
    loop {
        if steps * 2 > MAX_STEPS {
            return Err(Error::Integration(format!(
                "no convergence within {MAX_STEPS} steps (pulse tau = {}, fastest rate = {rate} rad/s)",
                pulse.duration
            )));
        }
        steps *= 2;
        let fine = midpoint_propagator(dim, &couplings, pulse, steps)?;
        let delta = fine.max_abs_diff(&coarse)?;
        if delta < CONVERGENCE_TOL {
            let drift = unitarity_drift(&fine)?;
            if drift > PULSE_NORM_TOL {
                return Err(Error::Integration(format!(
                    "propagator drifted from unitarity by {drift:.3e}"
                )));
            }
            return Ok(Propagation {
                propagator: fine,
                steps,
                refinement_delta: delta,
            });
        }
        coarse = fine;
    }
}

/// Applies `pulse` to `state` (given at the pulse start) and returns the
/// interaction-frame state at the pulse end.
pub fn evolve_pulse(
    sys: &SpinSystem,
    state: &QuantumState,
    pulse: &Pulse,
    scope: DriveScope,
) -> Result<QuantumState> {
    check_pulse_register(state)?;
    let prop = pulse_propagator(sys, state.n(), pulse, scope)?;
    state.apply(&prop.propagator)
}

fn check_fidelity_inputs(u_sim: &ComplexMatrix, u_ideal: &ComplexMatrix) -> Result<()> {
    if u_sim.rows() != u_ideal.rows() || u_sim.cols() != u_ideal.cols() {
        return Err(Error::dims(
            format!("{}x{}", u_ideal.rows(), u_ideal.cols()),
            format!("{}x{}", u_sim.rows(), u_sim.cols()),
        ));
    }
    for (name, u) in [("simulated", u_sim), ("ideal", u_ideal)] {
        if !u.is_unitary(1e-8)? {
            return Err(Error::invalid(format!("{name} matrix is not unitary")));
        }
    }
    Ok(())
}

/// `|Tr(U_ideal† U_sim)| / d`; insensitive to a global phase.
pub fn gate_fidelity(u_sim: &ComplexMatrix, u_ideal: &ComplexMatrix) -> Result<f64> {
    check_fidelity_inputs(u_sim, u_ideal)?;
    let tr = u_ideal.adjoint().matmul(u_sim)?.trace()?;
    Ok((tr.norm() / u_sim.rows() as f64).min(1.0))
}

/// The ideal gate followed by the diagonal phase correction that best
/// matches `u_sim`. Diagonal phases are what z rotations and free coupling
/// evolution can undo.
pub fn phase_adjusted_ideal(u_sim: &ComplexMatrix, u_ideal: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_fidelity_inputs(u_sim, u_ideal)?;
    let overlap = u_sim.matmul(&u_ideal.adjoint())?;
    let phases: Vec<Complex> = (0..u_sim.rows())
        .map(|k| {
            let z = overlap.get(k, k);
            if z == ZERO {
                Complex::new(1.0, 0.0)
            } else {
                z / z.norm()
            }
        })
        .collect();
    ComplexMatrix::diagonal(&phases).matmul(u_ideal)
}

/// `gate_fidelity` against `phase_adjusted_ideal`.
pub fn phase_adjusted_fidelity(u_sim: &ComplexMatrix, u_ideal: &ComplexMatrix) -> Result<f64> {
    gate_fidelity(u_sim, &phase_adjusted_ideal(u_sim, u_ideal)?)
}
