//! n-spin registers: basis labels, state vectors and entanglement checks.
//!
//! Spin states are labelled in NMR notation (`|+>`, `|->` along z) or as
//! qubits (`|0>`, `|1>`). Label strings always list spin 1 first, while the
//! integer translation reads spin 1 as the least-significant bit, so
//! `|-+> = |10> = |1>` and `|+-> = |01> = |2>`.

use std::fmt;

use crate::error::{Error, Result};
use crate::format::{format_sig, SUPPRESS_BELOW};
use crate::linalg::{hermitian_eigen, Complex, ComplexMatrix, ComplexVector, DEFAULT_TOL};

/// Largest register handled by the ideal-gate layer.
pub const MAX_SPINS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    /// `|+>_z`, qubit `0`
    Plus,
    /// `|->_z`, qubit `1`
    Minus,
}

impl Sign {
    pub fn bit(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A computational-basis label; `signs[0]` is spin 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateLabel {
    signs: Vec<Sign>,
}

impl StateLabel {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.is_empty() || signs.len() > MAX_SPINS {
            return Err(Error::invalid(format!(
                "label must have 1..={MAX_SPINS} spins, got {}",
                signs.len()
            )));
        }
        Ok(StateLabel { signs })
    }

    /// Parses `+`/`-` strings such as `"+-+"` (spin 1 first).
    pub fn from_signs(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|ch| match ch {
                '+' => Ok(Sign::Plus),
                '-' | '−' => Ok(Sign::Minus),
                other => Err(Error::invalid(format!("bad sign `{other}` in label `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(signs)
    }

    /// Parses qubit strings such as `"10"` (spin 1 first).
    pub fn from_bits(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(Sign::Plus),
                '1' => Ok(Sign::Minus),
                other => Err(Error::invalid(format!("bad bit `{other}` in label `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(signs)
    }

    pub fn from_index(n: usize, index: usize) -> Result<Self> {
        if n == 0 || n > MAX_SPINS || index >= 1 << n {
            return Err(Error::invalid(format!("index {index} out of range for {n} spins")));
        }
        Self::new(
            (0..n)
                .map(|k| if index >> k & 1 == 1 { Sign::Minus } else { Sign::Plus })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Sign of spin `spin` (1-based).
    pub fn sign(&self, spin: usize) -> Sign {
        self.signs[spin - 1]
    }

    pub fn index(&self) -> usize {
        translate_label(self)
    }

    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|s| s.symbol()).collect()
    }

    pub fn bit_string(&self) -> String {
        self.signs
            .iter()
            .map(|s| if s.bit() == 1 { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}>", self.sign_string())
    }
}

/// Integer value of a label, spin 1 being the least-significant bit.
pub fn translate_label(label: &StateLabel) -> usize {
    label
        .signs
        .iter()
        .enumerate()
        .map(|(k, s)| s.bit() << k)
        .sum()
}

/// Split of the spins into two non-empty groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    n: usize,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    /// `left` lists the 1-based spins of the first group; the rest form the second.
    pub fn new(n: usize, left: &[usize]) -> Result<Self> {
        let mut l: Vec<usize> = left.to_vec();
        l.sort_unstable();
        l.dedup();
        if l.len() != left.len() {
            return Err(Error::invalid("cut lists a spin twice"));
        }
        if l.iter().any(|&s| s == 0 || s > n) {
            return Err(Error::invalid(format!("cut spin out of range 1..={n}")));
        }
        if l.is_empty() || l.len() == n {
            return Err(Error::invalid("both sides of a cut must be non-empty"));
        }
        let right = (1..=n).filter(|s| !l.contains(s)).collect();
        Ok(Bipartition { n, left: l, right })
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    /// Every cut of an `n`-spin register, each listed once (spin 1 always on the left).
    pub fn all(n: usize) -> Vec<Bipartition> {
        (1..(1usize << n) - 1)
            .filter(|mask| mask & 1 == 1)
            .map(|mask| {
                let left: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect();
                Bipartition::new(n, &left).expect("valid mask")
            })
            .collect()
    }
}

/// Normalized pure state of `n` spins.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n: usize,
    amplitudes: ComplexVector,
}

impl QuantumState {
    pub fn new(n: usize, amplitudes: ComplexVector) -> Result<Self> {
        if n == 0 || n > MAX_SPINS {
            return Err(Error::invalid(format!("register must have 1..={MAX_SPINS} spins")));
        }
        if amplitudes.dim() != 1 << n {
            return Err(Error::dims(1usize << n, amplitudes.dim()));
        }
        let deviation = (amplitudes.norm() - 1.0).abs();
        if deviation > DEFAULT_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(QuantumState { n, amplitudes })
    }

    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex>) -> Result<Self> {
        Self::new(n, ComplexVector::new(amplitudes)?)
    }

    /// Superposition `Σ c_k |label_k>`; coefficients must already be normalized.
    pub fn from_terms(n: usize, terms: &[(&str, Complex)]) -> Result<Self> {
        let mut amps = vec![Complex::new(0.0, 0.0); 1 << n];
        for (label, amp) in terms {
            let label = StateLabel::from_signs(label)?;
            if label.n() != n {
                return Err(Error::dims(n, label.n()));
            }
            amps[label.index()] += amp;
        }
        Self::from_amplitudes(n, amps)
    }

    pub fn basis_state(n: usize, label: &StateLabel) -> Result<Self> {
        if label.n() != n {
            return Err(Error::dims(format!("{n} spins"), format!("{} spins", label.n())));
        }
        Self::new(n, ComplexVector::basis(1 << n, label.index()))
    }

    /// `|++...+>`
    pub fn ground(n: usize) -> Result<Self> {
        Self::basis_state(n, &StateLabel::new(vec![Sign::Plus; n])?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, label: &StateLabel) -> Complex {
        self.amplitudes[label.index()]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &QuantumState) -> Result<Complex> {
        if self.n != other.n {
            return Err(Error::dims(format!("{} spins", self.n), format!("{} spins", other.n)));
        }
        self.amplitudes.inner(&other.amplitudes)
    }

    /// Applies a unitary; fails if the result drifts from unit norm.
    pub fn apply(&self, u: &ComplexMatrix) -> Result<QuantumState> {
        Self::new(self.n, u.apply(&self.amplitudes)?)
    }

    pub fn scale_phase(&self, phase: Complex) -> Result<QuantumState> {
        Self::new(self.n, self.amplitudes.scale(phase))
    }

    pub fn max_abs_diff(&self, other: &QuantumState) -> Result<f64> {
        self.amplitudes.max_abs_diff(&other.amplitudes)
    }

    /// True iff `self ≈ λ·other` for some unit `λ`.
    pub fn equal_up_to_global_phase(&self, other: &QuantumState, tol: f64) -> Result<bool> {
        let overlap = other.inner(self)?;
        if overlap.norm() == 0.0 {
            return Ok(false);
        }
        let lambda = overlap / overlap.norm();
        Ok(self.max_abs_diff(&other.scale_phase(lambda)?)? <= tol)
    }

    /// Reduced density matrix of the left group of `cut`.
    pub fn reduced_density(&self, cut: &Bipartition) -> Result<ComplexMatrix> {
        if cut.n != self.n {
            return Err(Error::dims(format!("{}-spin cut", self.n), format!("{}-spin cut", cut.n)));
        }
        let dl = 1usize << cut.left.len();
        let dr = 1usize << cut.right.len();
        let place = |group: &[usize], local: usize| -> usize {
            group
                .iter()
                .enumerate()
                .map(|(k, &spin)| (local >> k & 1) << (spin - 1))
                .sum()
        };
        // Amplitudes reshaped into a dl × dr matrix along the cut.
        let m = ComplexMatrix::from_fn(dl, dr, |a, b| {
            self.amplitudes[place(&cut.left, a) | place(&cut.right, b)]
        });
        m.matmul(&m.adjoint())
    }

    /// Schmidt coefficients across `cut`, largest first.
    pub fn schmidt_coefficients(&self, cut: &Bipartition) -> Result<Vec<f64>> {
        let rho = self.reduced_density(cut)?;
        let (values, _) = hermitian_eigen(&rho)?;
        Ok(values.iter().rev().map(|&p| p.max(0.0).sqrt()).collect())
    }

    /// Purity `Tr ρ²` of either side of the cut.
    pub fn purity(&self, cut: &Bipartition) -> Result<f64> {
        Ok(self
            .schmidt_coefficients(cut)?
            .iter()
            .map(|s| s.powi(4))
            .sum())
    }

    pub fn is_product_state(&self, cut: &Bipartition, tol: f64) -> Result<bool> {
        Ok(self.purity(cut)? > 1.0 - tol)
    }

    /// Nonzero amplitudes with their labels, in index order.
    pub fn terms(&self) -> Vec<(StateLabel, Complex)> {
        self.amplitudes
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() >= SUPPRESS_BELOW)
            .map(|(i, &a)| (StateLabel::from_index(self.n, i).expect("index in range"), a))
            .collect()
    }

    /// One line per nonzero amplitude: `<signs> <bits> <integer> <re> <im>`.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (label, a) in self.terms() {
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                label.sign_string(),
                label.bit_string(),
                label.index(),
                format_sig(a.re),
                format_sig(a.im)
            ));
        }
        out
    }
}
