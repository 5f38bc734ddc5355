//! Gate sequences over an n-spin register.
//!
//! Steps are stored in application order: the first step acts first. A
//! matrix product written the usual way reads right to left, so
//! `[A; B]` has unitary `B·A`.

mod pulsed;
mod text;

pub use pulsed::{run_pulse, GateReport, PulseRun, ScheduledPulse};
pub use text::parse_angle;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gates::{embed, ControlCondition, Gate};
use crate::linalg::{Complex, ComplexMatrix, ONE};
use crate::register::{QuantumState, MAX_SPINS};

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    steps: Vec<Gate>,
    global_phase: Complex,
}

impl Circuit {
    pub fn new(n: usize, steps: Vec<Gate>) -> Result<Circuit> {
        if n == 0 || n > MAX_SPINS {
            return Err(Error::invalid(format!("register size {n} outside 1..={MAX_SPINS}")));
        }
        for gate in &steps {
            gate.validate(n)?;
        }
        Ok(Circuit {
            n,
            steps,
            global_phase: ONE,
        })
    }

    /// Records an overall phase `λ` such that the intended operator is
    /// `λ · circuit_unitary()`.
    pub fn with_global_phase(mut self, phase: Complex) -> Result<Circuit> {
        if (phase.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("global phase {phase} is not unimodular")));
        }
        self.global_phase = phase;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[Gate] {
        &self.steps
    }

    pub fn global_phase(&self) -> Complex {
        self.global_phase
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The circuit undoing this one: reversed steps, each inverted.
    pub fn inverse(&self) -> Circuit {
        let steps = self.steps.iter().rev().flat_map(inverse_gate).collect();
        Circuit {
            n: self.n,
            steps,
            global_phase: self.global_phase.conj(),
        }
    }

    /// Ordered product of the embedded step matrices (global phase excluded).
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        let mut u = ComplexMatrix::identity(1 << self.n);
        for gate in &self.steps {
            u = embed(gate, self.n)?.matmul(&u)?;
        }
        Ok(u)
    }

    /// `global_phase · unitary()`.
    pub fn unitary_with_global_phase(&self) -> Result<ComplexMatrix> {
        Ok(self.unitary()?.scale(self.global_phase))
    }
}

fn inverse_gate(gate: &Gate) -> Vec<Gate> {
    match *gate {
        Gate::Rotation { axis, spin, angle } => vec![Gate::Rotation {
            axis,
            spin,
            angle: -angle,
        }],
        // F^4 = 1
        Gate::Qft => vec![Gate::Qft; 3],
        other => vec![other],
    }
}

/// Ordered product of embedded step matrices.
pub fn circuit_unitary(c: &Circuit) -> Result<ComplexMatrix> {
    c.unitary()
}

/// States before and after every step.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionTrace {
    pub initial: QuantumState,
    /// `states[k]` is the state after step `k`.
    pub states: Vec<QuantumState>,
    /// `unitaries[k]` is the operator applied at step `k`.
    pub unitaries: Vec<ComplexMatrix>,
}

impl ExecutionTrace {
    pub fn final_state(&self) -> &QuantumState {
        self.states.last().unwrap_or(&self.initial)
    }
}

/// Applies the exact step matrices in order.
pub fn run_ideal(c: &Circuit, input: &QuantumState) -> Result<ExecutionTrace> {
    if input.n() != c.n {
        return Err(Error::dims(
            format!("{}-spin input", c.n),
            format!("{}-spin input", input.n()),
        ));
    }
    let mut states = Vec::with_capacity(c.steps.len());
    let mut unitaries = Vec::with_capacity(c.steps.len());
    let mut current = input.clone();
    for gate in &c.steps {
        let u = embed(gate, c.n)?;
        current = current.apply(&u)?;
        states.push(current.clone());
        unitaries.push(u);
    }
    Ok(ExecutionTrace {
        initial: input.clone(),
        states,
        unitaries,
    })
}

/// Names accepted by [`builtin`].
pub fn builtin_names() -> Vec<String> {
    let mut names: Vec<String> = ["ghz3", "bell-readout", "not2"].iter().map(|s| s.to_string()).collect();
    names.extend((1..=MAX_SPINS).map(|n| format!("qft-{n}")));
    names
}

/// The worked circuits.
///
/// * `ghz3`: `|+++>` to `(|+++> + |--->)/√2`. The first rotation is
///   `Ry(-π/4)`; with `Ry(+π/4)` the `|--->` amplitude comes out negative.
/// * `bell-readout`: Bell basis to computational basis on two spins.
/// * `not2`: flips both spins, with global phase `-1`.
/// * `qft-<n>`: the Fourier transform on `n` spins.
pub fn builtin(name: &str) -> Result<Circuit> {
    use ControlCondition::Minus;
    let key = name.trim().to_ascii_lowercase();
    match key.as_str() {
        "ghz3" => Circuit::new(
            3,
            vec![Gate::ry(3, -PI / 4.0), Gate::cnot(2, 3, Minus), Gate::cnot(1, 2, Minus)],
        ),
        "bell-readout" => Circuit::new(2, vec![Gate::cnot(1, 2, Minus), Gate::ry(2, PI / 4.0)]),
        "not2" => Circuit::new(2, vec![Gate::rx(1, PI / 2.0), Gate::rx(2, PI / 2.0)])?
            .with_global_phase(-ONE),
        _ => {
            let n = key
                .strip_prefix("qft-")
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|n| (1..=MAX_SPINS).contains(n))
                .ok_or_else(|| {
                    Error::invalid(format!(
                        "unknown builtin `{name}` (known: {})",
                        builtin_names().join(", ")
                    ))
                })?;
            Circuit::new(n, vec![Gate::Qft])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{bell_readout_matrix, cnot_matrix, not_all_matrix, BellState};
    use crate::register::{Bipartition, StateLabel};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    #[test]
    fn ghz3_prepares_ghz() {
        let trace = run_ideal(&builtin("ghz3").unwrap(), &QuantumState::ground(3).unwrap()).unwrap();
        let ghz =
            QuantumState::from_terms(3, &[("+++", c(FRAC_1_SQRT_2)), ("---", c(FRAC_1_SQRT_2))]).unwrap();
        assert!(trace.final_state().max_abs_diff(&ghz).unwrap() < 1e-12);
        assert_eq!(trace.states.len(), 3);
        // after Ry(-π/4) on spin 3: (|+++> + |++->)/√2
        let first =
            QuantumState::from_terms(3, &[("+++", c(FRAC_1_SQRT_2)), ("++-", c(FRAC_1_SQRT_2))]).unwrap();
        assert!(trace.states[0].max_abs_diff(&first).unwrap() < 1e-12);
        // the opposite sign leaves a minus on |--->
        let flipped = Circuit::new(
            3,
            vec![
                Gate::ry(3, PI / 4.0),
                Gate::cnot(2, 3, ControlCondition::Minus),
                Gate::cnot(1, 2, ControlCondition::Minus),
            ],
        )
        .unwrap();
        let out = run_ideal(&flipped, &QuantumState::ground(3).unwrap()).unwrap();
        let minus = out.final_state().amplitude(&StateLabel::from_signs("---").unwrap());
        assert!((minus - c(-FRAC_1_SQRT_2)).norm() < 1e-12);
    }

    #[test]
    fn empty_circuit_is_identity() {
        let circuit = Circuit::new(2, vec![]).unwrap();
        let psi = BellState::PsiPlus.state();
        let trace = run_ideal(&circuit, &psi).unwrap();
        assert_eq!(trace.final_state(), &psi);
        assert_eq!(circuit.unitary().unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn disentangles_bell_pair() {
        let circuit = Circuit::new(2, vec![Gate::cnot(1, 2, ControlCondition::Minus)]).unwrap();
        let out = run_ideal(&circuit, &BellState::PhiPlus.state()).unwrap();
        let expected =
            QuantumState::from_terms(2, &[("++", c(FRAC_1_SQRT_2)), ("+-", c(FRAC_1_SQRT_2))]).unwrap();
        assert!(out.final_state().max_abs_diff(&expected).unwrap() < 1e-12);
        let cut = Bipartition::new(2, &[1]).unwrap();
        assert!(out.final_state().is_product_state(&cut, 1e-9).unwrap());
    }

    #[test]
    fn builtin_unitaries() {
        let t = builtin("bell-readout").unwrap().unitary().unwrap();
        assert!(t.max_abs_diff(&bell_readout_matrix()).unwrap() < 1e-12);
        let not2 = builtin("not2").unwrap();
        let n = not_all_matrix(2).unwrap();
        assert!(not2.unitary().unwrap().max_abs_diff(&n.scale(-ONE)).unwrap() < 1e-12);
        assert!(not2.unitary_with_global_phase().unwrap().max_abs_diff(&n).unwrap() < 1e-12);
        let single = Circuit::new(2, vec![Gate::cnot(2, 1, ControlCondition::Plus)]).unwrap();
        assert_eq!(
            single.unitary().unwrap(),
            cnot_matrix(2, 1, ControlCondition::Plus).unwrap()
        );
        assert_eq!(builtin("QFT-3").unwrap().n(), 3);
        for bad in ["qft-0", "qft-7", "ghz4", "qft-x"] {
            assert!(builtin(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn inverse_undoes_circuit() {
        for name in builtin_names() {
            let circuit = builtin(&name).unwrap();
            let round = circuit
                .inverse()
                .unitary()
                .unwrap()
                .matmul(&circuit.unitary().unwrap())
                .unwrap();
            assert!(round.max_abs_diff(&ComplexMatrix::identity(round.rows())).unwrap() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_circuits() {
        assert!(Circuit::new(2, vec![Gate::rx(3, 1.0)]).is_err());
        assert!(Circuit::new(0, vec![]).is_err());
        assert!(Circuit::new(7, vec![]).is_err());
        let circuit = builtin("ghz3").unwrap();
        assert!(run_ideal(&circuit, &QuantumState::ground(2).unwrap()).is_err());
        assert!(Circuit::new(2, vec![]).unwrap().with_global_phase(c(2.0)).is_err());
    }
}
