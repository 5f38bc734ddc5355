//! Dense complex vectors and matrices.
//!
//! Everything here is sized for desk-scale registers (at most 64x64), so the
//! storage is a plain row-major `Vec`. Hamiltonians are expressed in units of
//! ħ·rad/s, i.e. a generator `h` evolves as `exp(-i h t)` with `t` in seconds.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Default max-norm tolerance used wherever a tolerance is optional.
pub const DEFAULT_TOL: f64 = 1e-9;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

/// Layout of multi-spin basis vectors.
///
/// `SpinOneFastest` is the only convention: basis index `i` has spin `k` in
/// `|->` iff bit `k - 1` of `i` is set. For two spins this gives
/// `|++> = e1, |-+> = e2, |+-> = e3, |--> = e4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisOrdering {
    #[default]
    SpinOneFastest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex>,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::invalid("vector must have positive dimension"));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(ComplexVector { data })
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexVector {
            data: vec![ZERO; dim],
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`, conjugating the left argument.
    pub fn inner(&self, other: &ComplexVector) -> Result<Complex> {
        if self.dim() != other.dim() {
            return Err(Error::dims(self.dim(), other.dim()));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&self, factor: Complex) -> Self {
        ComplexVector {
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &ComplexVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::dims(self.dim(), other.dim()));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex;

    fn index(&self, i: usize) -> &Complex {
        &self.data[i]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix must have positive dimensions"));
        }
        if data.len() != rows * cols {
            return Err(Error::dims(rows * cols, data.len()));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Builds a matrix from a slice of equal-length rows.
    pub fn from_rows<R: AsRef<[Complex]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::dims(cols, r.len()));
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![ONE; n])
    }

    pub fn diagonal(entries: &[Complex]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.cols + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex) {
        self.data[row * self.cols + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector {
            data: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::dims(
                format!("{} rows", self.cols),
                format!("{} rows", other.rows),
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::dims(self.cols, v.dim()));
        }
        let data = (0..self.rows)
            .map(|i| self.row(i).iter().zip(&v.data).map(|(a, b)| a * b).sum())
            .collect();
        Ok(ComplexVector { data })
    }

    /// Tensor product `self ⊗ other` where `self` acts on the lower-numbered
    /// spins and `other` on the higher-numbered ones.
    ///
    /// With spin 1 as the fastest-varying index, `R ⊗ 1` is block-diagonal
    /// `[[R, 0], [0, R]]` and `1 ⊗ R` has blocks `r_ij · 1`.
    pub fn kron(&self, other: &ComplexMatrix, ordering: BasisOrdering) -> ComplexMatrix {
        match ordering {
            BasisOrdering::SpinOneFastest => other.kron_standard(self),
        }
    }

    /// Textbook Kronecker product: `self` indexes the outer (slow) blocks.
    pub fn kron_standard(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |i, j| {
            self.get(i / other.rows, j / other.cols) * other.get(i % other.rows, j % other.cols)
        })
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, factor: Complex) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &ComplexMatrix,
        f: impl Fn(Complex, Complex) -> Complex,
    ) -> Result<ComplexMatrix> {
        self.check_same_shape(other)?;
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    fn check_same_shape(&self, other: &ComplexMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dims(
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        Ok(())
    }

    fn check_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn trace(&self) -> Result<Complex> {
        self.check_square()?;
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    /// True iff `max|a†a - I| <= tol`.
    pub fn is_unitary(&self, tol: f64) -> Result<bool> {
        self.check_square()?;
        let gram = self.adjoint().matmul(self)?;
        Ok(gram.max_abs_diff(&Self::identity(self.rows))? <= tol)
    }

    pub fn hermiticity_deviation(&self) -> Result<f64> {
        self.check_square()?;
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> Result<bool> {
        Ok(self.hermiticity_deviation()? <= tol)
    }

    /// Finds the unit phase `λ` such that `self ≈ λ·other`, read off the
    /// largest-magnitude entry of `other`. `None` if `other` is zero there
    /// or `self` vanishes at that position.
    pub fn relative_phase(&self, other: &ComplexMatrix) -> Result<Option<Complex>> {
        self.check_same_shape(other)?;
        let (idx, pivot) = other
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("matrices are non-empty");
        let ratio = self.data[idx] / pivot;
        if pivot.norm() == 0.0 || ratio.norm() == 0.0 || !ratio.is_finite() {
            return Ok(None);
        }
        Ok(Some(ratio / ratio.norm()))
    }

    /// True iff some unit complex `λ` gives `max|self - λ·other| <= tol`.
    pub fn equal_up_to_global_phase(&self, other: &ComplexMatrix, tol: f64) -> Result<bool> {
        match self.relative_phase(other)? {
            Some(lambda) => Ok(self.max_abs_diff(&other.scale(lambda))? <= tol),
            None => Ok(self.max_norm() <= tol && other.max_norm() <= tol),
        }
    }

    pub fn pow(&self, exponent: u32) -> Result<ComplexMatrix> {
        self.check_square()?;
        let mut out = Self::identity(self.rows);
        for _ in 0..exponent {
            out = out.matmul(self)?;
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// the unitary whose columns are the matching eigenvectors.
///
/// Cyclic complex Jacobi: each rotation first removes the phase of the
/// pivot `a_pq`, then applies a real plane rotation zeroing it.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    h.check_square()?;
    let scale = h.max_norm().max(1.0);
    let tol = DEFAULT_TOL * scale;
    let deviation = h.hermiticity_deviation()?;
    if deviation > tol {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: tol,
        });
    }
    let n = h.rows;
    // Work on the Hermitian part.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| 0.5 * (h.get(i, j) + h.get(j, i).conj()));
    let mut v = ComplexMatrix::identity(n);
    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let threshold = f64::EPSILON * scale * 1e-2;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if off_norm(&a) > 1e3 * f64::EPSILON * scale {
        return Err(Error::invalid("Hermitian eigensolver did not converge"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(x, x).re.total_cmp(&a.get(y, y).re));
    let values = order.iter().map(|&k| a.get(k, k).re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    Ok((values, vectors))
}

const JACOBI_MAX_SWEEPS: usize = 64;

fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.rows;
    let apq = a.get(p, q);
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    // e^{-iφ} with a_pq = |a_pq| e^{iφ}
    let unphase = apq.conj() / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on (p, q); A <- J† A J, V <- V J
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c - akq * unphase * s);
        a.set(k, q, akp * s + akq * unphase * c);
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - vkq * unphase * s);
        v.set(k, q, vkp * s + vkq * unphase * c);
    }
    let rephase = unphase.conj();
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c - aqk * rephase * s);
        a.set(q, k, apk * s + aqk * rephase * c);
    }
    a.set(p, q, ZERO);
    a.set(q, p, ZERO);
    a.set(p, p, Complex::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex::new(a.get(q, q).re, 0.0));
}

/// Propagator `exp(-i h t)` for a Hermitian generator `h` (in ħ·rad/s).
pub fn expm_hermitian_generator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFinite("evolution time"));
    }
    let (values, vectors) = hermitian_eigen(h)?;
    let phases: Vec<Complex> = values
        .iter()
        .map(|&lambda| Complex::from_polar(1.0, -lambda * t))
        .collect();
    let n = h.rows;
    // V diag(phases) V†
    let out = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| vectors.get(i, k) * phases[k] * vectors.get(j, k).conj())
            .sum()
    });
    Ok(out)
}

/// Pauli matrices in the `|+>, |->` basis.
pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap()
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]]).unwrap()
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn rx(theta: f64) -> ComplexMatrix {
        let (s, co) = theta.sin_cos();
        ComplexMatrix::from_rows(&[[c(co, 0.0), c(0.0, s)], [c(0.0, s), c(co, 0.0)]]).unwrap()
    }

    fn rz(theta: f64) -> ComplexMatrix {
        ComplexMatrix::diagonal(&[Complex::from_polar(1.0, theta), Complex::from_polar(1.0, -theta)])
    }

    // Independent oracle: truncated Taylor series with scaling and squaring.
    fn expm_taylor(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let a = h.scale(c(0.0, -t));
        let norm = a.max_norm() * a.rows() as f64;
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let a = a.scale(c(0.5f64.powi(squarings as i32), 0.0));
        let mut term = ComplexMatrix::identity(a.rows());
        let mut sum = term.clone();
        for k in 1..30 {
            term = term.matmul(&a).unwrap().scale(c(1.0 / k as f64, 0.0));
            sum = sum.add(&term).unwrap();
        }
        for _ in 0..squarings {
            sum = sum.matmul(&sum).unwrap();
        }
        sum
    }

    #[test]
    fn matmul_identity_and_involution() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(id.matmul(&sigma_x()).unwrap(), sigma_x());
        assert_eq!(sigma_x().matmul(&sigma_x()).unwrap(), id);
    }

    #[test]
    fn rx_half_pi_squared_is_minus_identity() {
        // Rx(π) = [[cos π, i sin π], [i sin π, cos π]] = -I
        let prod = rx(PI / 2.0).matmul(&rx(PI / 2.0)).unwrap();
        let minus_id = ComplexMatrix::identity(2).scale(c(-1.0, 0.0));
        assert!(prod.max_abs_diff(&minus_id).unwrap() < 1e-15);
        assert!(prod.max_abs_diff(&rx(PI)).unwrap() < 1e-15);
    }

    #[test]
    fn matmul_rejects_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn kron_block_structures() {
        let r = ComplexMatrix::from_rows(&[[c(1.0, 0.5), c(2.0, 0.0)], [c(3.0, 0.0), c(4.0, -1.0)]])
            .unwrap();
        let id = ComplexMatrix::identity(2);
        let left = r.kron(&id, BasisOrdering::SpinOneFastest);
        let right = id.kron(&r, BasisOrdering::SpinOneFastest);
        for i in 0..4 {
            for j in 0..4 {
                // R ⊗ 1: two R blocks on the diagonal.
                let expected = if i / 2 == j / 2 { r.get(i % 2, j % 2) } else { ZERO };
                assert_eq!(left.get(i, j), expected);
                // 1 ⊗ R: blocks r_ij · 1.
                let expected = if i % 2 == j % 2 { r.get(i / 2, j / 2) } else { ZERO };
                assert_eq!(right.get(i, j), expected);
            }
        }
    }

    #[test]
    fn kron_sigma_x_is_antidiagonal() {
        let m = sigma_x().kron(&sigma_x(), BasisOrdering::SpinOneFastest);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i + j == 3 { ONE } else { ZERO };
                assert_eq!(m.get(i, j), expected);
            }
        }
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(sigma_y().adjoint(), sigma_y());
        let theta = 0.37;
        assert!(rz(theta).adjoint().max_abs_diff(&rz(-theta)).unwrap() < 1e-15);
    }

    #[test]
    fn unitarity_predicate() {
        assert!(ComplexMatrix::identity(4).is_unitary(1e-12).unwrap());
        let mut m = ComplexMatrix::identity(4);
        m.set(1, 2, c(1e-3, 0.0));
        assert!(!m.is_unitary(1e-6).unwrap());
        assert!(matches!(
            ComplexMatrix::zeros(2, 3).is_unitary(1e-6),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn expm_free_precession_is_rz() {
        // H0' = -(1/2) ω1 σz  =>  exp(-i H0' t) = Rz(ω1 t / 2)
        let omega1 = 2.0 * PI * 25.0;
        let t = 0.0137;
        let h = sigma_z().scale(c(-0.5 * omega1, 0.0));
        let u = expm_hermitian_generator(&h, t).unwrap();
        assert!(u.max_abs_diff(&rz(omega1 * t / 2.0)).unwrap() < 1e-12);
    }

    #[test]
    fn expm_transverse_drive_is_rx() {
        let omega_p = 7.3;
        let t = 0.41;
        let h = sigma_x().scale(c(-0.5 * omega_p, 0.0));
        let u = expm_hermitian_generator(&h, t).unwrap();
        assert!(u.max_abs_diff(&rx(omega_p * t / 2.0)).unwrap() < 1e-12);
    }

    #[test]
    fn expm_at_zero_time_is_identity() {
        let h = sigma_y().scale(c(3.0, 0.0));
        let u = expm_hermitian_generator(&h, 0.0).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(2)).unwrap() < 1e-14);
    }

    #[test]
    fn expm_rejects_non_hermitian() {
        let h = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(matches!(
            expm_hermitian_generator(&h, 1.0),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigen_handles_degenerate_complex_blocks() {
        // Two 2x2 blocks with equal spectra and complex couplings.
        let mut h = ComplexMatrix::zeros(4, 4);
        let a = Complex::from_polar(-1.1, 0.2135 - 3.1);
        let b = Complex::from_polar(-1.1, -0.2135 - 3.1);
        h.set(0, 2, a);
        h.set(2, 0, a.conj());
        h.set(1, 3, b);
        h.set(3, 1, b.conj());
        let (values, v) = hermitian_eigen(&h).unwrap();
        let d = ComplexMatrix::diagonal(&values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
        let rebuilt = v.matmul(&d).unwrap().matmul(&v.adjoint()).unwrap();
        assert!(rebuilt.max_abs_diff(&h).unwrap() < 1e-14);
        assert!(v.is_unitary(1e-14).unwrap());
        for (x, y) in values.iter().zip([-1.1, -1.1, 1.1, 1.1]) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn global_phase_equality() {
        let id = ComplexMatrix::identity(4);
        assert!(id.scale(c(-1.0, 0.0)).equal_up_to_global_phase(&id, 1e-12).unwrap());
        assert!(!sigma_x().equal_up_to_global_phase(&sigma_z(), 1e-9).unwrap());
        let u = rx(0.3);
        let phase = Complex::from_polar(1.0, 1.1);
        assert!(u.scale(phase).equal_up_to_global_phase(&u, 1e-12).unwrap());
    }

    fn arb_complex() -> impl Strategy<Value = Complex> {
        (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| c(re, im))
    }

    fn arb_hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec(arb_complex(), n * n).prop_map(move |v| {
            let a = ComplexMatrix::new(n, n, v).unwrap();
            a.add(&a.adjoint()).unwrap()
        })
    }

    fn arb_unitary2() -> impl Strategy<Value = ComplexMatrix> {
        (arb_hermitian(2), -3.0..3.0f64)
            .prop_map(|(h, t)| expm_hermitian_generator(&h, t).unwrap())
    }

    proptest! {
        #[test]
        fn kron_mixed_product(a in arb_unitary2(), b in arb_unitary2(),
                              c2 in arb_unitary2(), d in arb_unitary2()) {
            let o = BasisOrdering::SpinOneFastest;
            let lhs = a.kron(&b, o).matmul(&c2.kron(&d, o)).unwrap();
            let rhs = a.matmul(&c2).unwrap().kron(&b.matmul(&d).unwrap(), o);
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10);
        }

        #[test]
        fn expm_is_unitary(h in arb_hermitian(4), scale in 0.0..120.0f64, t in -1.0..1.0f64) {
            // ‖h‖·|t| up to ~10³
            let h = h.scale(c(scale, 0.0));
            let u = expm_hermitian_generator(&h, t).unwrap();
            prop_assert!(u.is_unitary(1e-10).unwrap());
        }

        #[test]
        fn expm_matches_taylor_oracle(h in arb_hermitian(4), t in -2.0..2.0f64) {
            let u = expm_hermitian_generator(&h, t).unwrap();
            let oracle = expm_taylor(&h, t);
            prop_assert!(u.max_abs_diff(&oracle).unwrap() < 1e-10);
        }

        #[test]
        fn adjoint_is_involution(v in proptest::collection::vec(arb_complex(), 6)) {
            let a = ComplexMatrix::new(2, 3, v).unwrap();
            prop_assert_eq!(a.adjoint().adjoint(), a);
        }
    }
}
