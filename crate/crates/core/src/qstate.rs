//! Small dense Hermitian matrices: density operators of one and two qubits,
//! their spectra, entropies, partial traces and validity checks.
//!
//! Two-qubit states use the computational basis ordering
//! `|00>, |01>, |10>, |11>` with the first factor being subsystem A (index 1).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum `|m_ij - conj(m_ji)|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues in `[-NEG_EIGEN_TOL, 0)` are round-off; below that the state is unphysical.
pub const NEG_EIGEN_TOL: f64 = 1e-9;
/// Slack on unit trace in [`ValidationMode::Ideal`] and on the trace ceiling in lossy mode.
pub const TRACE_TOL: f64 = 1e-9;
/// Slack on probabilities handed to [`binary_entropy`].
pub const PROB_TOL: f64 = 1e-12;

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Dense `N x N` complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize>(pub [[C64; N]; N]);

pub type Matrix2 = Matrix<2>;
pub type Matrix4 = Matrix<4>;

impl<const N: usize> Matrix<N> {
    pub fn zeros() -> Self {
        Self([[C64::new(0.0, 0.0); N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real_diag(diag: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m.0[i][i] = C64::new(d, 0.0);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z = z.conj());
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0_f64;
        for i in 0..N {
            for j in i..N {
                dev = dev.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        dev
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..N {
            for j in 0..N {
                if i != j {
                    s += self.0[i][j].norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

/// Kronecker product of two 2x2 matrices.
pub fn kron(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    let mut out = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    out
}

/// Spectrum and eigenvectors of a Hermitian matrix.
///
/// `values` are sorted descending; column `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: Matrix<N>,
}

/// Cyclic complex Jacobi diagonalization.
///
/// Only the Hermitian part of `m` is used; callers are expected to have
/// checked Hermiticity already.
pub fn eigh<const N: usize>(m: &Matrix<N>) -> HermitianEigen<N> {
    let mut a = *m;
    // symmetrize so round-off in the input cannot bias the sweep
    for i in 0..N {
        a.0[i][i] = C64::new(a.0[i][i].re, 0.0);
        for j in (i + 1)..N {
            let h = (a.0[i][j] + a.0[j][i].conj()) * 0.5;
            a.0[i][j] = h;
            a.0[j][i] = h.conj();
        }
    }
    let mut v = Matrix::<N>::identity();
    let scale = a.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if a.off_diagonal_norm() <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a.0[p][q];
                let r = apq.norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                // phase that makes a_pq real and positive
                let phase = apq / r;
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // U acts on columns p, q: U_pp = c, U_pq = s * phase, U_qp = -s * conj(phase), U_qq = c
                let u_pp = C64::new(c, 0.0);
                let u_pq = phase * s;
                let u_qp = -phase.conj() * s;
                let u_qq = C64::new(c, 0.0);

                // A <- A U
                for k in 0..N {
                    let akp = a.0[k][p];
                    let akq = a.0[k][q];
                    a.0[k][p] = akp * u_pp + akq * u_qp;
                    a.0[k][q] = akp * u_pq + akq * u_qq;
                }
                // A <- U^dagger A
                for k in 0..N {
                    let apk = a.0[p][k];
                    let aqk = a.0[q][k];
                    a.0[p][k] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a.0[q][k] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a.0[p][q] = C64::new(0.0, 0.0);
                a.0[q][p] = C64::new(0.0, 0.0);
                for k in 0..N {
                    let vkp = v.0[k][p];
                    let vkq = v.0[k][q];
                    v.0[k][p] = vkp * u_pp + vkq * u_qp;
                    v.0[k][q] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a.0[j][j].re.total_cmp(&a.0[i][i].re));
    let values = std::array::from_fn(|k| a.0[order[k]][order[k]].re);
    let mut vectors = Matrix::<N>::zeros();
    for (k, &col) in order.iter().enumerate() {
        for row in 0..N {
            vectors.0[row][k] = v.0[row][col];
        }
    }
    HermitianEigen { values, vectors }
}

/// Which validity conditions a state must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    /// Unit trace and positive semidefinite.
    #[default]
    Ideal,
    /// Non-trace-preserving evolution: trace may fall below one, positivity is not required.
    Lossy,
}

/// Hermitian density operator on `N` levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<const N: usize>(Matrix<N>);

pub type DensityMatrix2 = DensityMatrix<2>;
pub type DensityMatrix4 = DensityMatrix<4>;

impl<const N: usize> DensityMatrix<N> {
    pub fn new(m: Matrix<N>) -> Result<Self> {
        let deviation = m.hermiticity_deviation();
        if deviation.is_nan() || deviation > HERMITIAN_TOL {
            return Err(Error::NonHermitianInput { deviation });
        }
        Ok(Self(m))
    }

    pub fn from_real_diag(diag: [f64; N]) -> Self {
        Self(Matrix::from_real_diag(diag))
    }

    /// Maximally mixed state `I/N`.
    pub fn maximally_mixed() -> Self {
        Self(Matrix::identity().scale(1.0 / N as f64))
    }

    pub fn matrix(&self) -> &Matrix<N> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0.get(i, j)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> [f64; N] {
        if N == 2 {
            let a = self.0.0[0][0].re;
            let d = self.0.0[1][1].re;
            let b = self.0.0[0][1].norm();
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + b * b).sqrt();
            let mut out = [0.0; N];
            out[0] = mean + half_gap;
            out[1] = mean - half_gap;
            return out;
        }
        eigh(&self.0).values
    }

    pub fn eigen(&self) -> HermitianEigen<N> {
        eigh(&self.0)
    }

    /// `U rho U^dagger`.
    pub fn conjugate_by(&self, u: &Matrix<N>) -> Self {
        Self(u.mul(&self.0).mul(&u.adjoint()))
    }
}

/// Eigenvalues of a Hermitian 4x4 matrix, sorted descending.
pub fn eigenvalues_hermitian(m: &Matrix4) -> Result<[f64; 4]> {
    Ok(DensityMatrix4::new(*m)?.eigenvalues())
}

/// Shannon entropy in bits of a (sub-)normalized spectrum.
///
/// Values in `[-1e-9, 0)` are clamped to zero; anything outside
/// `[-1e-9, 1 + 1e-9]` or non-finite is an [`Error::IndeterminateEntropy`].
pub fn spectrum_entropy(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &x in values {
        if !x.is_finite() || !(-NEG_EIGEN_TOL..=1.0 + NEG_EIGEN_TOL).contains(&x) {
            return Err(Error::IndeterminateEntropy { value: x });
        }
        let x = x.clamp(0.0, 1.0);
        if x > 0.0 {
            s -= x * x.log2();
        }
    }
    Ok(s)
}

/// Von Neumann entropy `-tr(rho log2 rho)` in bits.
pub fn von_neumann_entropy<const N: usize>(rho: &DensityMatrix<N>) -> Result<f64> {
    spectrum_entropy(&rho.eigenvalues())
}

/// `H(x) = -x log2 x - (1-x) log2 (1-x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !x.is_finite() || !(-PROB_TOL..=1.0 + PROB_TOL).contains(&x) {
        return Err(Error::DomainError { value: x });
    }
    let x = x.clamp(0.0, 1.0);
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

/// Two-qubit subsystem label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Self::A => Self::B,
            Self::B => Self::A,
        }
    }
}

/// Reduced state of the kept subsystem.
pub fn partial_trace(rho: &DensityMatrix4, keep: Subsystem) -> DensityMatrix2 {
    let m = rho.matrix();
    let mut out = Matrix2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            out.0[i][j] = match keep {
                Subsystem::A => m.get(2 * i, 2 * j) + m.get(2 * i + 1, 2 * j + 1),
                Subsystem::B => m.get(i, j) + m.get(2 + i, 2 + j),
            };
        }
    }
    DensityMatrix(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonFinite,
    NotHermitian { deviation: f64 },
    TraceNotUnit { trace: f64 },
    TraceAboveOne { trace: f64 },
    NegativeEigenvalue { value: f64 },
}

/// Outcome of [`validate_state`]. Never an error; callers inspect `violations`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub trace: f64,
    /// `1 - trace`.
    pub trace_deficit: f64,
    pub min_eigenvalue: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_state(m: &Matrix4, mode: ValidationMode) -> ValidationReport {
    let trace = m.trace().re;
    let mut report = ValidationReport {
        mode,
        trace,
        trace_deficit: 1.0 - trace,
        min_eigenvalue: f64::NAN,
        violations: Vec::new(),
    };
    if !m.is_finite() {
        report.violations.push(Violation::NonFinite);
        return report;
    }
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        report.violations.push(Violation::NotHermitian { deviation });
        return report;
    }
    let min_eig = eigh(m).values[3];
    report.min_eigenvalue = min_eig;
    match mode {
        ValidationMode::Ideal => {
            if (trace - 1.0).abs() > TRACE_TOL {
                report.violations.push(Violation::TraceNotUnit { trace });
            }
            if min_eig < -NEG_EIGEN_TOL {
                report.violations.push(Violation::NegativeEigenvalue { value: min_eig });
            }
        }
        ValidationMode::Lossy => {
            if trace > 1.0 + TRACE_TOL {
                report.violations.push(Violation::TraceAboveOne { trace });
            }
        }
    }
    report
}

/// Two-qubit X state: diagonal plus the two anti-diagonal coherences.
///
/// `outer` sits at positions (1,4)/(4,1) and `inner` at (2,3)/(3,2)
/// (1-based). Both coherences are real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XState {
    pub d: [f64; 4],
    pub outer: f64,
    pub inner: f64,
    #[serde(default)]
    pub mode: ValidationMode,
}

impl XState {
    pub fn new(d: [f64; 4], outer: f64, inner: f64) -> Self {
        Self {
            d,
            outer,
            inner,
            mode: ValidationMode::Ideal,
        }
    }

    pub fn with_mode(mut self, mode: ValidationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn trace(&self) -> f64 {
        self.d.iter().sum()
    }

    pub fn to_matrix(&self) -> Matrix4 {
        let mut m = Matrix4::from_real_diag(self.d);
        m.0[0][3] = C64::new(self.outer, 0.0);
        m.0[3][0] = C64::new(self.outer, 0.0);
        m.0[1][2] = C64::new(self.inner, 0.0);
        m.0[2][1] = C64::new(self.inner, 0.0);
        m
    }

    pub fn to_density(&self) -> DensityMatrix4 {
        DensityMatrix(self.to_matrix())
    }

    /// Spectrum from the two 2x2 blocks, sorted descending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let block = |a: f64, d: f64, c: f64| {
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + c * c).sqrt();
            [mean + half_gap, mean - half_gap]
        };
        let [o1, o2] = block(self.d[0], self.d[3], self.outer);
        let [i1, i2] = block(self.d[1], self.d[2], self.inner);
        let mut out = [o1, o2, i1, i2];
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }

    /// Diagonal reduced state of subsystem `keep`.
    pub fn reduced_diag(&self, keep: Subsystem) -> [f64; 2] {
        let [d1, d2, d3, d4] = self.d;
        match keep {
            Subsystem::A => [d1 + d2, d3 + d4],
            Subsystem::B => [d1 + d3, d2 + d4],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.d.iter().all(|x| x.is_finite()) && self.outer.is_finite() && self.inner.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn bell() -> XState {
        XState::new([0.5, 0.0, 0.0, 0.5], 0.5, 0.0)
    }

    fn random_unitary4(seed: [f64; 32]) -> Matrix4 {
        // Gram-Schmidt on a random complex matrix
        let mut cols: Vec<[C64; 4]> = (0..4)
            .map(|c| std::array::from_fn(|r| C64::new(seed[8 * c + 2 * r], seed[8 * c + 2 * r + 1])))
            .collect();
        for c in 0..4 {
            for prev in 0..c {
                let proj: C64 = (0..4).map(|r| cols[prev][r].conj() * cols[c][r]).sum();
                for r in 0..4 {
                    let p = cols[prev][r];
                    cols[c][r] -= proj * p;
                }
            }
            let n = cols[c].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            cols[c].iter_mut().for_each(|z| *z /= n);
        }
        let mut u = Matrix4::zeros();
        for c in 0..4 {
            for r in 0..4 {
                u.0[r][c] = cols[c][r];
            }
        }
        u
    }

    #[test]
    fn eigenvalues_identity_and_pure() {
        let ev = eigenvalues_hermitian(&Matrix4::identity().scale(0.25)).unwrap();
        for e in ev {
            assert_abs_diff_eq!(e, 0.25, epsilon = 1e-14);
        }
        let ev = eigenvalues_hermitian(&Matrix4::from_real_diag([1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(ev, [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn eigenvalues_bell_x_state() {
        let x = bell();
        let expected = [1.0, 0.0, 0.0, 0.0];
        let general = eigenvalues_hermitian(&x.to_matrix()).unwrap();
        for k in 0..4 {
            assert_abs_diff_eq!(general[k], expected[k], epsilon = 1e-13);
            assert_abs_diff_eq!(x.eigenvalues()[k], expected[k], epsilon = 1e-15);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = Matrix4::identity();
        m.0[0][1] = C64::new(0.1, 0.0);
        assert!(matches!(
            eigenvalues_hermitian(&m),
            Err(Error::NonHermitianInput { .. })
        ));
    }

    #[test]
    fn jacobi_reconstructs_matrix() {
        let mut m = Matrix4::zeros();
        let entries = [(0, 1, 0.3, 0.2), (0, 3, -0.1, 0.05), (1, 2, 0.07, -0.3), (2, 3, 0.2, 0.0)];
        for (i, j, re, im) in entries {
            m.0[i][j] = C64::new(re, im);
            m.0[j][i] = C64::new(re, -im);
        }
        for (i, d) in [0.4, 0.3, 0.2, 0.1].into_iter().enumerate() {
            m.0[i][i] = C64::new(d, 0.0);
        }
        let e = eigh(&m);
        let lambda = Matrix4::from_real_diag(e.values);
        let back = e.vectors.mul(&lambda).mul(&e.vectors.adjoint());
        for i in 0..4 {
            for j in 0..4 {
                assert!((back.get(i, j) - m.get(i, j)).norm() < 1e-12);
            }
        }
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(
            von_neumann_entropy(&DensityMatrix4::from_real_diag([1.0, 0.0, 0.0, 0.0])).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(
            von_neumann_entropy(&DensityMatrix4::maximally_mixed()).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        let h02 = -(0.2f64 * 0.2f64.log2() + 0.8 * 0.8f64.log2());
        assert_abs_diff_eq!(
            von_neumann_entropy(&DensityMatrix2::from_real_diag([0.2, 0.8])).unwrap(),
            h02,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(h02, 0.721928, epsilon = 1e-6);
    }

    #[test]
    fn entropy_clamps_roundoff_and_rejects_negative() {
        assert_abs_diff_eq!(spectrum_entropy(&[1.0, -5e-10]).unwrap(), 0.0);
        assert!(matches!(
            spectrum_entropy(&[1.0, -1e-6]),
            Err(Error::IndeterminateEntropy { .. })
        ));
        assert!(spectrum_entropy(&[f64::NAN]).is_err());
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.2).unwrap(), 0.7219280948873623, epsilon = 1e-15);
        assert_eq!(binary_entropy(-1e-13).unwrap(), 0.0);
        assert!(matches!(binary_entropy(1.001), Err(Error::DomainError { .. })));
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn partial_trace_examples() {
        let red = partial_trace(&bell().to_density(), Subsystem::A);
        assert_abs_diff_eq!(red.get(0, 0).re, 0.5);
        assert_abs_diff_eq!(red.get(1, 1).re, 0.5);
        assert_abs_diff_eq!(red.get(0, 1).norm(), 0.0);

        let red = partial_trace(&DensityMatrix4::from_real_diag([1.0, 0.0, 0.0, 0.0]), Subsystem::B);
        assert_eq!(red.get(0, 0).re, 1.0);
        assert_eq!(red.get(1, 1).re, 0.0);

        let x = XState::new([0.4, 0.2, 0.15, 0.25], 0.2, 0.0);
        let red = partial_trace(&x.to_density(), Subsystem::A);
        assert_abs_diff_eq!(red.get(0, 0).re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(red.get(1, 1).re, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(x.reduced_diag(Subsystem::A)[1], 0.4, epsilon = 1e-15);
        let red_b = partial_trace(&x.to_density(), Subsystem::B);
        assert_abs_diff_eq!(red_b.get(0, 0).re, 0.55, epsilon = 1e-15);
    }

    #[test]
    fn validation_examples() {
        assert!(validate_state(&Matrix4::identity().scale(0.25), ValidationMode::Ideal).is_ok());

        let short = Matrix4::from_real_diag([0.5, 0.2, 0.1, 0.1]);
        let ideal = validate_state(&short, ValidationMode::Ideal);
        assert!(matches!(ideal.violations[..], [Violation::TraceNotUnit { .. }]));

        let lossy = validate_state(&short, ValidationMode::Lossy);
        assert!(lossy.is_ok());
        assert_abs_diff_eq!(lossy.trace_deficit, 0.1, epsilon = 1e-12);

        let over = Matrix4::from_real_diag([0.9, 0.2, 0.1, 0.1]);
        assert!(!validate_state(&over, ValidationMode::Lossy).is_ok());

        let mut neg = Matrix4::from_real_diag([0.5, 0.5, 0.0, 0.0]);
        neg.0[0][3] = C64::new(0.1, 0.0);
        neg.0[3][0] = C64::new(0.1, 0.0);
        let r = validate_state(&neg, ValidationMode::Ideal);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::NegativeEigenvalue { .. })));
        assert!(validate_state(&neg, ValidationMode::Lossy).is_ok());
    }

    proptest! {
        #[test]
        fn eigenvalue_sum_equals_trace(entries in proptest::collection::vec(-1.0f64..1.0, 16)) {
            let mut m = Matrix4::zeros();
            let mut k = 0;
            for i in 0..4 {
                m.0[i][i] = C64::new(entries[k], 0.0);
                k += 1;
                for j in (i + 1)..4 {
                    m.0[i][j] = C64::new(entries[k], entries[(k + 7) % 16]);
                    m.0[j][i] = m.0[i][j].conj();
                    k += 1;
                }
            }
            let ev = eigenvalues_hermitian(&m).unwrap();
            prop_assert!((ev.iter().sum::<f64>() - m.trace().re).abs() < 1e-10);
            prop_assert!(ev.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn entropy_is_unitarily_invariant(
            probs in proptest::collection::vec(0.0f64..1.0, 4),
            seed in proptest::array::uniform32(-1.0f64..1.0),
        ) {
            let total: f64 = probs.iter().sum::<f64>().max(1e-9);
            let diag: [f64; 4] = std::array::from_fn(|i| probs[i] / total);
            let rho = DensityMatrix4::from_real_diag(diag);
            let u = random_unitary4(seed);
            let rotated = rho.conjugate_by(&u);
            let s0 = von_neumann_entropy(&rho).unwrap();
            let s1 = von_neumann_entropy(&rotated).unwrap();
            prop_assert!((s0 - s1).abs() < 1e-9, "{s0} vs {s1}");
        }

        #[test]
        fn partial_traces_keep_unit_trace(
            probs in proptest::collection::vec(0.01f64..1.0, 4),
            c in 0.0f64..1.0,
        ) {
            let total: f64 = probs.iter().sum();
            let d: [f64; 4] = std::array::from_fn(|i| probs[i] / total);
            let x = XState::new(d, c * (d[0] * d[3]).sqrt(), 0.0);
            for keep in [Subsystem::A, Subsystem::B] {
                prop_assert!((partial_trace(&x.to_density(), keep).trace() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn binary_entropy_matches_von_neumann_on_grid() {
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            let vn = von_neumann_entropy(&DensityMatrix2::from_real_diag([x, 1.0 - x])).unwrap();
            assert_abs_diff_eq!(binary_entropy(x).unwrap(), vn, epsilon = 1e-12);
        }
    }
}
