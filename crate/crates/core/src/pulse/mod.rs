//! NMR pulse layer for one or two spins.

mod compile;
mod config;
mod evolve;
mod system;

pub use compile::{rotation_duration, BandwidthModel, Pulse, PulseCompiler};
pub use config::SystemConfig;
pub use evolve::{
    change_frame, evolve_free, evolve_pulse, free_propagator, gate_fidelity, phase_adjusted_fidelity,
    phase_adjusted_ideal, pulse_propagator, DriveScope, Propagation, CONVERGENCE_TOL, NORM_TOL, PULSE_NORM_TOL,
};
pub use system::{
    one_spin_hamiltonian, static_hamiltonian, transition_line, transition_spectrum, Frame, SpinSystem,
    TransitionLine,
};
