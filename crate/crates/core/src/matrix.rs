//! Small dense complex matrices for one and two qubits.
//!
//! Everything here is fixed-size: `CMat<2>` for a single spin and `CMat<4>` for the
//! pair, with the two-spin basis ordered `|++>, |+->, |-+>, |-->` (spin A is the
//! left tensor factor). Hermitian spectra come from a cyclic complex Jacobi solver.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Hermiticity slack accepted by the eigensolver, relative to the largest entry.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius norm falls below this (relative) bound.
pub const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Density-matrix validation thresholds.
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-12;
pub const DENSITY_TRACE_TOL: f64 = 1e-12;
pub const DENSITY_PSD_TOL: f64 = 1e-10;

/// Dense square complex matrix of fixed dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat<const N: usize> {
    pub entries: [[C64; N]; N],
}

pub type Mat2 = CMat<2>;
pub type Mat4 = CMat<4>;

impl<const N: usize> Default for CMat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> CMat<N> {
    pub const DIM: usize = N;

    pub fn zeros() -> Self {
        Self {
            entries: [[ZERO; N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.entries[i][i] = ONE;
        }
        m
    }

    pub fn from_entries(entries: [[C64; N]; N]) -> Self {
        Self { entries }
    }

    pub fn from_real(entries: [[f64; N]; N]) -> Self {
        Self {
            entries: entries.map(|row| row.map(|x| C64::new(x, 0.0))),
        }
    }

    pub fn diagonal(values: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, v) in values.into_iter().enumerate() {
            m.entries[i][i] = C64::new(v, 0.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.entries[j][i] = self.entries[i][j].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        let mut m = *self;
        for row in m.entries.iter_mut() {
            for z in row.iter_mut() {
                *z = z.conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.entries[i][i]).sum()
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut m = *self;
        for row in m.entries.iter_mut() {
            for z in row.iter_mut() {
                *z *= k;
            }
        }
        m
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(C64::new(k, 0.0))
    }

    /// `self * other * self^dagger`.
    pub fn conjugate(&self, other: &Self) -> Self {
        *self * *other * self.adjoint()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `max |m - m^dagger|`.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |m^dagger m - 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i][j]
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.entries[i][j] += rhs.entries[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.entries[i][j] -= rhs.entries[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.entries[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.entries[i][j] += a * rhs.entries[k][j];
                }
            }
        }
        out
    }
}

/// Kronecker product of two single-spin operators, `a` acting on spin A.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.entries[2 * i + k][2 * j + l] = a.entries[i][j] * b.entries[k][l];
                }
            }
        }
    }
    m
}

pub mod pauli {
    use super::{Mat2, C64, I, ONE, ZERO};

    pub fn x() -> Mat2 {
        Mat2::from_entries([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn y() -> Mat2 {
        Mat2::from_entries([[ZERO, -I], [I, ZERO]])
    }

    pub fn z() -> Mat2 {
        Mat2::from_entries([[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]])
    }
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// unitary whose columns are the matching eigenvectors.
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: CMat<N>,
}

fn check_hermitian<const N: usize>(m: &CMat<N>) -> Result<()> {
    let deviation = m.hermitian_deviation();
    if !(deviation <= HERMITIAN_INPUT_TOL * m.max_abs().max(1.0)) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

fn off_diagonal_norm<const N: usize>(m: &CMat<N>) -> f64 {
    let mut sum = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                sum += m.entries[i][j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each pivot `(p, q)` is first phase-aligned so the pivot entry is real, then
/// annihilated with an ordinary real rotation. The combined transform is
/// `J = diag(1, e*) * R` on the `(p, q)` plane, `e = a_pq / |a_pq|`.
pub fn hermitian_eigen<const N: usize>(m: &CMat<N>) -> Result<HermitianEigen<N>> {
    check_hermitian(m)?;
    // Symmetrize away the rounding-level anti-Hermitian part.
    let mut a = (*m + m.adjoint()).scale_real(0.5);
    let mut v = CMat::<N>::identity();
    let threshold = JACOBI_OFF_DIAGONAL_TOL * a.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            converged = true;
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a.entries[p][q];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let e = apq / g;
                let app = a.entries[p][p].re;
                let aqq = a.entries[q][q].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = -e.conj() * s;
                let jqq = e.conj() * c;

                // A <- A J, V <- V J
                for k in 0..N {
                    let (akp, akq) = (a.entries[k][p], a.entries[k][q]);
                    a.entries[k][p] = akp * jpp + akq * jqp;
                    a.entries[k][q] = akp * jpq + akq * jqq;
                    let (vkp, vkq) = (v.entries[k][p], v.entries[k][q]);
                    v.entries[k][p] = vkp * jpp + vkq * jqp;
                    v.entries[k][q] = vkp * jpq + vkq * jqq;
                }
                // A <- J^dagger A
                for k in 0..N {
                    let (apk, aqk) = (a.entries[p][k], a.entries[q][k]);
                    a.entries[p][k] = jpp.conj() * apk + jqp.conj() * aqk;
                    a.entries[q][k] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a.entries[p][q] = ZERO;
                a.entries[q][p] = ZERO;
            }
        }
    }
    if !converged && off_diagonal_norm(&a) >= threshold {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a.entries[i][i].re.total_cmp(&a.entries[j][j].re));
    let values = order.map(|i| a.entries[i][i].re);
    let mut vectors = CMat::<N>::zeros();
    for (col, &src) in order.iter().enumerate() {
        for row in 0..N {
            vectors.entries[row][col] = v.entries[row][src];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Real eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues<const N: usize>(m: &CMat<N>) -> Result<[f64; N]> {
    hermitian_eigen(m).map(|e| e.values)
}

/// `V f(Λ) V^dagger` for a Hermitian matrix.
pub fn hermitian_map<const N: usize>(m: &CMat<N>, f: impl Fn(f64) -> f64) -> Result<CMat<N>> {
    let eig = hermitian_eigen(m)?;
    let mut d = CMat::<N>::zeros();
    for i in 0..N {
        d.entries[i][i] = C64::new(f(eig.values[i]), 0.0);
    }
    Ok(eig.vectors * d * eig.vectors.adjoint())
}

/// `-sum p log2 p` with `0 log 0 = 0`. Inputs must already be clamped.
pub fn shannon_bits(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    probabilities
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<const N: usize>(CMat<N>);

pub type TwoQubitState = DensityMatrix<4>;
pub type QubitState = DensityMatrix<2>;

impl<const N: usize> DensityMatrix<N> {
    pub fn new(m: CMat<N>) -> Result<Self> {
        let deviation = m.hermitian_deviation();
        if !(deviation <= DENSITY_HERMITIAN_TOL) {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = m.trace().re;
        if !((trace - 1.0).abs() <= DENSITY_TRACE_TOL) {
            return Err(Error::TraceNotUnit { trace });
        }
        let min = hermitian_eigenvalues(&m)?[0];
        if min < -DENSITY_PSD_TOL {
            return Err(Error::NegativeEigenvalue { eigenvalue: min });
        }
        Ok(Self(m))
    }

    /// Maximally mixed state `1/N`.
    pub fn maximally_mixed() -> Self {
        Self(CMat::identity().scale_real(1.0 / N as f64))
    }

    /// Projector onto a normalized pure state.
    pub fn pure(amplitudes: [C64; N]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !((norm - 1.0).abs() <= DENSITY_TRACE_TOL) {
            return Err(Error::TraceNotUnit { trace: norm });
        }
        let mut m = CMat::<N>::zeros();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = amplitudes[i] * amplitudes[j].conj();
            }
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &CMat<N> {
        &self.0
    }

    pub fn into_matrix(self) -> CMat<N> {
        self.0
    }

    pub fn eigenvalues(&self) -> [f64; N] {
        // Validated on construction, so the solver cannot reject it.
        hermitian_eigenvalues(&self.0).expect("validated density matrix")
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(self).expect("validated density matrix")
    }

    /// `U rho U^dagger`, revalidated.
    pub fn evolve(&self, u: &CMat<N>) -> Result<Self> {
        let m = u.conjugate(&self.0);
        Self::new((m + m.adjoint()).scale_real(0.5))
    }
}

impl TwoQubitState {
    pub fn product(a: &QubitState, b: &QubitState) -> Self {
        Self(kron(a.matrix(), b.matrix()))
    }
}

/// Which spin survives a partial trace or carries a local measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// Von Neumann entropy in bits. Eigenvalues in `[-1e-10, 0)` are clamped to zero.
pub fn von_neumann_entropy<const N: usize>(rho: &DensityMatrix<N>) -> Result<f64> {
    entropy_of_matrix(rho.matrix())
}

/// Entropy of a raw Hermitian matrix, with the same clamping and PSD check.
pub fn entropy_of_matrix<const N: usize>(m: &CMat<N>) -> Result<f64> {
    let values = hermitian_eigenvalues(m)?;
    if values[0] < -DENSITY_PSD_TOL {
        return Err(Error::NegativeEigenvalue {
            eigenvalue: values[0],
        });
    }
    Ok(shannon_bits(values.iter().map(|&l| l.max(0.0))))
}

/// Raw partial trace of a two-spin operator.
pub fn partial_trace_matrix(m: &Mat4, keep: Subsystem) -> Mat2 {
    let mut out = Mat2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            out.entries[i][j] = match keep {
                Subsystem::A => m.entries[2 * i][2 * j] + m.entries[2 * i + 1][2 * j + 1],
                Subsystem::B => m.entries[i][j] + m.entries[2 + i][2 + j],
            };
        }
    }
    out
}

/// Reduced state of one spin.
pub fn partial_trace(rho: &TwoQubitState, keep: Subsystem) -> QubitState {
    // Partial trace is trace preserving and positive; the marginal of a valid state is valid.
    DensityMatrix(partial_trace_matrix(rho.matrix(), keep))
}
