//! Gate set and exact unitaries.
//!
//! Rotations follow the half-angle convention `R_u(θ) = exp(iθσ_u)`, so
//! `Rx(π/2) = iσx` is already a full spin flip and a resonant pulse of
//! strength `ωp` applied for `τ` realizes `θ = ωp τ / 2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Complex, ComplexMatrix, I, ONE, ZERO};
use crate::register::{QuantumState, Sign, MAX_SPINS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// Control state that triggers a CNOT flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ControlCondition {
    Plus,
    Minus,
}

impl ControlCondition {
    pub fn sign(self) -> Sign {
        match self {
            ControlCondition::Plus => Sign::Plus,
            ControlCondition::Minus => Sign::Minus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ControlCondition::Plus => "plus",
            ControlCondition::Minus => "minus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// One-spin rotation `R_axis(angle)` on `spin`.
    Rotation { axis: Axis, spin: usize, angle: f64 },
    /// `C^target_{control±}`: flips `target` when `control` is in `condition`.
    Cnot {
        target: usize,
        control: usize,
        condition: ControlCondition,
    },
    /// Flips every spin of the register.
    NotAll,
    /// Bell-to-computational readout on spins 1 and 2.
    BellReadout,
    /// Quantum Fourier transform over the whole register.
    Qft,
}

impl Gate {
    pub fn rx(spin: usize, angle: f64) -> Gate {
        Gate::Rotation { axis: Axis::X, spin, angle }
    }

    pub fn ry(spin: usize, angle: f64) -> Gate {
        Gate::Rotation { axis: Axis::Y, spin, angle }
    }

    pub fn rz(spin: usize, angle: f64) -> Gate {
        Gate::Rotation { axis: Axis::Z, spin, angle }
    }

    pub fn cnot(target: usize, control: usize, condition: ControlCondition) -> Gate {
        Gate::Cnot { target, control, condition }
    }

    /// Checks spin indices against an `n`-spin register.
    pub fn validate(&self, n: usize) -> Result<()> {
        let in_range = |s: usize| (1..=n).contains(&s);
        match *self {
            Gate::Rotation { spin, angle, .. } => {
                if !angle.is_finite() {
                    return Err(Error::invalid(format!("{self}: angle must be finite")));
                }
                if !in_range(spin) {
                    return Err(Error::invalid(format!("{self}: spin {spin} outside 1..={n}")));
                }
            }
            Gate::Cnot { target, control, .. } => {
                if target == control {
                    return Err(Error::invalid(format!("{self}: control equals target")));
                }
                if !in_range(target) || !in_range(control) {
                    return Err(Error::invalid(format!("{self}: spin outside 1..={n}")));
                }
            }
            Gate::BellReadout if n < 2 => {
                return Err(Error::invalid("bell readout needs at least 2 spins"));
            }
            _ => {}
        }
        Ok(())
    }

    /// Short identifier without spaces, used in pulse schedules.
    pub fn name(&self) -> String {
        match *self {
            Gate::Rotation { axis, spin, angle } => {
                format!("r{}_s{}_{}", axis.name(), spin, crate::format::format_sig(angle))
            }
            Gate::Cnot { target, control, condition } => {
                format!("cnot_t{}_c{}_{}", target, control, condition.name())
            }
            Gate::NotAll => "not".to_string(),
            Gate::BellReadout => "bellread".to_string(),
            Gate::Qft => "qft".to_string(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Rotation { axis, spin, angle } => write!(f, "r{} {} {}", axis.name(), spin, angle),
            Gate::Cnot { target, control, condition } => {
                write!(f, "cnot {} {} {}", target, control, condition.name())
            }
            Gate::NotAll => write!(f, "not"),
            Gate::BellReadout => write!(f, "bellread"),
            Gate::Qft => write!(f, "qft"),
        }
    }
}

/// `R_axis(θ) = exp(iθσ_axis)` in the `|+>, |->` basis.
pub fn rotation_matrix(axis: Axis, theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    let c = Complex::new(c, 0.0);
    let rows = match axis {
        Axis::X => [[c, I * s], [I * s, c]],
        Axis::Y => [[c, Complex::new(s, 0.0)], [Complex::new(-s, 0.0), c]],
        Axis::Z => [
            [Complex::from_polar(1.0, theta), ZERO],
            [ZERO, Complex::from_polar(1.0, -theta)],
        ],
    };
    ComplexMatrix::from_rows(&rows).expect("2x2")
}

/// Local CNOT on an ordered spin pair: local bit 0 is the target, bit 1 the control.
fn local_cnot(condition: ControlCondition) -> ComplexMatrix {
    let c = condition.sign().bit();
    ComplexMatrix::from_fn(4, 4, |i, j| {
        let flipped = if j >> 1 == c { j ^ 1 } else { j };
        if i == flipped {
            ONE
        } else {
            ZERO
        }
    })
}

/// Two-spin CNOT; `{target, control}` must be `{1, 2}`.
pub fn cnot_matrix(target: usize, control: usize, condition: ControlCondition) -> Result<ComplexMatrix> {
    if target == control {
        return Err(Error::invalid("CNOT control equals target"));
    }
    if !matches!((target, control), (1, 2) | (2, 1)) {
        return Err(Error::invalid("two-spin CNOT acts on spins 1 and 2"));
    }
    embed_local(&local_cnot(condition), &[target, control], 2)
}

/// Inverts every spin; for two spins this is the anti-diagonal permutation.
pub fn not_all_matrix(n: usize) -> Result<ComplexMatrix> {
    check_register(n)?;
    let mask = (1usize << n) - 1;
    Ok(ComplexMatrix::from_fn(1 << n, 1 << n, |i, j| {
        if i == j ^ mask {
            ONE
        } else {
            ZERO
        }
    }))
}

/// Readout gate mapping `Φ+ → |0>`, `Ψ+ → |1>`, `-Φ- → |2>` and `Ψ- → |3>`.
pub fn bell_readout_matrix() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[
        [h, 0.0, 0.0, h],
        [0.0, h, h, 0.0],
        [-h, 0.0, 0.0, h],
        [0.0, -h, h, 0.0],
    ])
    .expect("4x4")
}

/// Quantum Fourier transform on `n` spins: entry `(k, x) = e^{2πikx/Q}/√Q`, `Q = 2^n`.
pub fn qft_matrix(n: usize) -> Result<ComplexMatrix> {
    check_register(n)?;
    let q = 1usize << n;
    let norm = 1.0 / (q as f64).sqrt();
    Ok(ComplexMatrix::from_fn(q, q, |k, x| {
        // Reduce kx mod Q first so the angle is exact for the quarter turns.
        let r = (k * x) % q;
        match (4 * r) % q {
            0 => {
                let quarter = 4 * r / q;
                let unit = [ONE, I, -ONE, -I][quarter];
                unit * norm
            }
            _ => Complex::from_polar(norm, 2.0 * PI * r as f64 / q as f64),
        }
    }))
}

fn check_register(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SPINS {
        return Err(Error::invalid(format!("register size {n} outside 1..={MAX_SPINS}")));
    }
    Ok(())
}

/// Lifts a `2^k × 2^k` operator acting on `spins` (local bit `j` = `spins[j]`)
/// to the full `n`-spin register, identity on the other spins.
pub fn embed_local(local: &ComplexMatrix, spins: &[usize], n: usize) -> Result<ComplexMatrix> {
    check_register(n)?;
    let k = spins.len();
    if local.rows() != 1 << k || local.cols() != 1 << k {
        return Err(Error::dims(
            format!("{0}x{0}", 1usize << k),
            format!("{}x{}", local.rows(), local.cols()),
        ));
    }
    for (a, &s) in spins.iter().enumerate() {
        if s == 0 || s > n || spins[..a].contains(&s) {
            return Err(Error::invalid(format!("bad spin list {spins:?} for {n} spins")));
        }
    }
    let mask: usize = spins.iter().map(|s| 1 << (s - 1)).sum();
    let gather = |global: usize| -> usize {
        spins
            .iter()
            .enumerate()
            .map(|(bit, s)| (global >> (s - 1) & 1) << bit)
            .sum()
    };
    let scatter = |local_idx: usize| -> usize {
        spins
            .iter()
            .enumerate()
            .map(|(bit, s)| (local_idx >> bit & 1) << (s - 1))
            .sum()
    };
    let dim = 1usize << n;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let rest = col & !mask;
        let lin = gather(col);
        for lout in 0..1 << k {
            let z = local.get(lout, lin);
            if z != ZERO {
                out.set(rest | scatter(lout), col, z);
            }
        }
    }
    Ok(out)
}

/// Full-register unitary of `gate` on `n` spins.
pub fn embed(gate: &Gate, n: usize) -> Result<ComplexMatrix> {
    check_register(n)?;
    gate.validate(n)?;
    match *gate {
        Gate::Rotation { axis, spin, angle } => embed_local(&rotation_matrix(axis, angle), &[spin], n),
        Gate::Cnot { target, control, condition } => {
            embed_local(&local_cnot(condition), &[target, control], n)
        }
        Gate::NotAll => not_all_matrix(n),
        Gate::BellReadout => embed_local(&bell_readout_matrix(), &[1, 2], n),
        Gate::Qft => qft_matrix(n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    /// `Φ± = (|++> ± |-->)/√2`, `Ψ± = (|+-> ± |-+>)/√2`.
    pub fn state(self) -> QuantumState {
        let h = Complex::new(FRAC_1_SQRT_2, 0.0);
        let terms = match self {
            BellState::PhiPlus => [("++", h), ("--", h)],
            BellState::PhiMinus => [("++", h), ("--", -h)],
            BellState::PsiPlus => [("+-", h), ("-+", h)],
            BellState::PsiMinus => [("+-", h), ("-+", -h)],
        };
        QuantumState::from_terms(2, &terms).expect("normalized")
    }

    pub fn parse(s: &str) -> Result<BellState> {
        match s.to_ascii_lowercase().as_str() {
            "phi+" => Ok(BellState::PhiPlus),
            "phi-" => Ok(BellState::PhiMinus),
            "psi+" => Ok(BellState::PsiPlus),
            "psi-" => Ok(BellState::PsiMinus),
            other => Err(Error::invalid(format!("unknown Bell state `{other}`"))),
        }
    }
}
