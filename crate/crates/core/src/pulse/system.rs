use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Complex, ComplexMatrix};
use crate::register::{Sign, StateLabel};

/// Reference frame in which a state is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Laboratory frame.
    Lab,
    /// Frame rotating about z at the Larmor frequency `ω0`.
    Rotating,
    /// Frame co-moving with the full static Hamiltonian (every level's free
    /// phase removed). Ideal gates act in this frame.
    Interaction,
}

/// Two coupled spins in a static field (all values in rad/s).
///
/// Static Hamiltonian:
/// `H0 = -(1/2)[Ω1 σz¹ + Ω2 σz² + ωc σz¹σz²]` with `Ωi = ω0 + ωi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinSystem {
    omega0: f64,
    omega1: f64,
    omega2: f64,
    omegac: f64,
}

impl SpinSystem {
    /// Validates every working assumption, including `ω1 - ω2 >= 4ωc`.
    pub fn new(omega0: f64, omega1: f64, omega2: f64, omegac: f64) -> Result<Self> {
        let sys = Self::unchecked(omega0, omega1, omega2, omegac);
        sys.validate()?;
        Ok(sys)
    }

    /// No validation. Pulse compilation still checks its own selectivity
    /// conditions, so this is how marginal systems are explored.
    pub fn unchecked(omega0: f64, omega1: f64, omega2: f64, omegac: f64) -> Self {
        SpinSystem {
            omega0,
            omega1,
            omega2,
            omegac,
        }
    }

    /// Desk-scale demo parameters: `ω0 = 2π·500`, `ω1 = 2π·25`, `ω2 = 2π·5`, `ωc = 2π·1`.
    pub fn demo() -> Self {
        let tau = std::f64::consts::TAU;
        Self::new(tau * 500.0, tau * 25.0, tau * 5.0, tau * 1.0).expect("demo parameters are valid")
    }

    pub fn validate(&self) -> Result<()> {
        let Self {
            omega0,
            omega1,
            omega2,
            omegac,
        } = *self;
        if ![omega0, omega1, omega2, omegac].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidSystem("parameters must be finite".into()));
        }
        if omega0 <= 0.0 {
            return Err(Error::InvalidSystem(format!("omega0 = {omega0} must be positive")));
        }
        if !(omega1 > omega2 && omega2 > 0.0) {
            return Err(Error::InvalidSystem(format!(
                "need omega1 > omega2 > 0 (omega1 = {omega1}, omega2 = {omega2})"
            )));
        }
        if omegac <= 0.0 {
            return Err(Error::InvalidSystem(format!("omegac = {omegac} must be positive")));
        }
        if omegac > omega0 / 100.0 {
            return Err(Error::InvalidSystem(format!(
                "weak coupling requires omegac <= omega0/100 (omegac = {omegac}, omega0 = {omega0})"
            )));
        }
        if omega1 - omega2 < 4.0 * omegac {
            return Err(Error::InvalidSystem(format!(
                "need omega1 - omega2 >= 4 omegac (omega1 - omega2 = {}, 4 omegac = {})",
                omega1 - omega2,
                4.0 * omegac
            )));
        }
        Ok(())
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn omegac(&self) -> f64 {
        self.omegac
    }

    /// Offset `ωi` of spin `i` from the Larmor frequency.
    pub fn offset(&self, spin: usize) -> f64 {
        match spin {
            1 => self.omega1,
            2 => self.omega2,
            _ => panic!("spin index {spin} outside 1..=2"),
        }
    }

    /// Lab-frame resonance `Ωi = ω0 + ωi` of spin `i`.
    pub fn big_omega(&self, spin: usize) -> f64 {
        self.omega0 + self.offset(spin)
    }

    /// Diagonal of the static Hamiltonian of an `n`-spin (1 or 2) register.
    /// A single spin is spin 1 alone, with no coupling term.
    pub fn energies(&self, n: usize, frame: Frame) -> Result<Vec<f64>> {
        let (o1, o2) = match frame {
            Frame::Lab => (self.big_omega(1), self.big_omega(2)),
            Frame::Rotating => (self.omega1, self.omega2),
            Frame::Interaction => return Ok(vec![0.0; 1 << n.min(2)]),
        };
        let z = |index: usize, spin: usize| if index >> (spin - 1) & 1 == 1 { -1.0 } else { 1.0 };
        match n {
            1 => Ok((0..2).map(|i| -0.5 * o1 * z(i, 1)).collect()),
            2 => Ok((0..4)
                .map(|i| -0.5 * (o1 * z(i, 1) + o2 * z(i, 2) + self.omegac * z(i, 1) * z(i, 2)))
                .collect()),
            _ => Err(Error::invalid(format!(
                "the pulse layer handles 1 or 2 spins, got {n}"
            ))),
        }
    }
}

/// Static two-spin Hamiltonian in units of ħ·rad/s.
pub fn static_hamiltonian(sys: &SpinSystem, frame: Frame) -> ComplexMatrix {
    let e = sys.energies(2, frame).expect("two spins");
    ComplexMatrix::diagonal(&e.iter().map(|&x| Complex::new(x, 0.0)).collect::<Vec<_>>())
}

/// One-spin Hamiltonian `-(1/2)(ω0 + ω1)σz` (lab) or `-(1/2)ω1σz` (rotating).
pub fn one_spin_hamiltonian(sys: &SpinSystem, frame: Frame) -> ComplexMatrix {
    let e = sys.energies(1, frame).expect("one spin");
    ComplexMatrix::diagonal(&e.iter().map(|&x| Complex::new(x, 0.0)).collect::<Vec<_>>())
}

/// One single-spin line of the spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionLine {
    /// Lab-frame angular frequency (rad/s).
    pub frequency: f64,
    /// Lower level (flipped spin in `|+>`).
    pub from: StateLabel,
    /// Upper level.
    pub to: StateLabel,
    pub flipped_spin: usize,
    /// State of the spin that does not flip.
    pub spectator: Sign,
}

impl TransitionLine {
    pub fn from_index(&self) -> usize {
        self.from.index()
    }

    pub fn to_index(&self) -> usize {
        self.to.index()
    }
}

impl fmt::Display for TransitionLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "freq={} transition={}<->{} flipped={} spectator={}",
            crate::format::format_sig(self.frequency),
            self.from.sign_string(),
            self.to.sign_string(),
            self.flipped_spin,
            self.spectator.symbol()
        )
    }
}

/// The four one-spin lines `Ω2 ± ωc`, `Ω1 ± ωc`, ascending in frequency.
/// Lines flipping both spins are left out.
pub fn transition_spectrum(sys: &SpinSystem) -> Vec<TransitionLine> {
    let e = sys.energies(2, Frame::Lab).expect("two spins");
    let mut lines = Vec::with_capacity(4);
    for flipped in 1..=2 {
        for spectator in [Sign::Plus, Sign::Minus] {
            let mut signs = [Sign::Plus; 2];
            signs[2 - flipped] = spectator;
            let from = StateLabel::new(signs.to_vec()).expect("two spins");
            signs[flipped - 1] = Sign::Minus;
            let to = StateLabel::new(signs.to_vec()).expect("two spins");
            lines.push(TransitionLine {
                frequency: e[to.index()] - e[from.index()],
                from,
                to,
                flipped_spin: flipped,
                spectator,
            });
        }
    }
    lines.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
    lines
}

/// The line flipping `spin` while the other spin sits in `spectator`.
pub fn transition_line(sys: &SpinSystem, spin: usize, spectator: Sign) -> TransitionLine {
    transition_spectrum(sys)
        .into_iter()
        .find(|l| l.flipped_spin == spin && l.spectator == spectator)
        .expect("every (spin, spectator) pair has a line")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn hamiltonian_diagonal_entries() {
        let sys = SpinSystem::demo();
        let h = static_hamiltonian(&sys, Frame::Lab);
        let (b1, b2, wc) = (sys.big_omega(1), sys.big_omega(2), sys.omegac());
        let (w1, w2) = (sys.omega1(), sys.omega2());
        let expected = [b1 + b2 + wc, -w1 + w2 - wc, w1 - w2 - wc, -b1 - b2 + wc];
        for (i, d) in expected.iter().enumerate() {
            assert!((h.get(i, i).re - (-0.5 * d)).abs() < 1e-9);
        }
        assert!(h.trace().unwrap().norm() < 1e-9);
        let rot = static_hamiltonian(&sys, Frame::Rotating);
        assert!((rot.get(0, 0).re + 0.5 * (w1 + w2 + wc)).abs() < 1e-12);
    }

    #[test]
    fn decoupled_limit_is_sum_of_one_spin_terms() {
        let sys = SpinSystem::unchecked(TAU * 500.0, TAU * 25.0, TAU * 5.0, 0.0);
        let h = static_hamiltonian(&sys, Frame::Lab);
        let o = crate::linalg::BasisOrdering::SpinOneFastest;
        let id = ComplexMatrix::identity(2);
        let z = crate::linalg::sigma_z();
        let sum = z
            .scale(Complex::new(-0.5 * sys.big_omega(1), 0.0))
            .kron(&id, o)
            .add(&id.kron(&z.scale(Complex::new(-0.5 * sys.big_omega(2), 0.0)), o))
            .unwrap();
        assert!(h.max_abs_diff(&sum).unwrap() < 1e-9);
        let mut freqs: Vec<f64> = transition_spectrum(&sys).iter().map(|l| l.frequency).collect();
        freqs.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert_eq!(freqs.len(), 2);
    }

    #[test]
    fn spectrum_matches_energy_differences() {
        let sys = SpinSystem::demo();
        let lines = transition_spectrum(&sys);
        let (b1, b2, wc) = (sys.big_omega(1), sys.big_omega(2), sys.omegac());
        let expected = [b2 - wc, b2 + wc, b1 - wc, b1 + wc];
        for (l, f) in lines.iter().zip(expected) {
            assert!((l.frequency - f).abs() < 1e-9, "{l}");
        }
        // |++> <-> |-+> is Ω1 + ωc; |+-> <-> |--> is Ω1 - ωc.
        let l = transition_line(&sys, 1, Sign::Plus);
        assert_eq!((l.from_index(), l.to_index()), (0, 1));
        assert!((l.frequency - (b1 + wc)).abs() < 1e-9);
        let l = transition_line(&sys, 1, Sign::Minus);
        assert_eq!((l.from_index(), l.to_index()), (2, 3));
        assert!((l.frequency - (b1 - wc)).abs() < 1e-9);
        let l = transition_line(&sys, 2, Sign::Plus);
        assert_eq!((l.from_index(), l.to_index()), (0, 2));
        assert!((l.frequency - (b2 + wc)).abs() < 1e-9);
    }

    #[test]
    fn validation() {
        assert!(SpinSystem::new(TAU * 500.0, TAU * 25.0, TAU * 5.0, 0.0).is_err());
        assert!(SpinSystem::new(TAU * 500.0, TAU * 5.0, TAU * 25.0, TAU).is_err());
        // ω1 - ω2 = 3ωc violates the 4ωc working assumption.
        assert!(SpinSystem::new(TAU * 500.0, TAU * 8.0, TAU * 5.0, TAU).is_err());
        assert!(SpinSystem::new(TAU * 50.0, TAU * 25.0, TAU * 5.0, TAU).is_err());
        assert!(SpinSystem::new(TAU * 500.0, TAU * 9.0, TAU * 5.0, TAU).is_ok());
    }
}
