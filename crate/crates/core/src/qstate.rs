//! Qubit states, Bloch vectors and the Pauli product basis.
//!
//! Conventions used everywhere downstream:
//! - qubit 0 is the leftmost tensor factor, so basis states enumerate in
//!   binary order (00, 01, 10, 11);
//! - Pauli coefficients follow `c_s = Tr(m P_s) / N`, so
//!   `m = sum_s c_s P_s`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::eigen::{hermitian_eigensystem, Eigensystem};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::rng::RandomStream;
use crate::tol;

/// Single-qubit Pauli basis symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let c = Complex64::new;
        let rows = match self {
            Pauli::I => vec![
                vec![c(1.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(1.0, 0.0)],
            ],
            Pauli::X => vec![
                vec![c(0.0, 0.0), c(1.0, 0.0)],
                vec![c(1.0, 0.0), c(0.0, 0.0)],
            ],
            Pauli::Y => vec![
                vec![c(0.0, 0.0), c(0.0, -1.0)],
                vec![c(0.0, 1.0), c(0.0, 0.0)],
            ],
            Pauli::Z => vec![
                vec![c(1.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(-1.0, 0.0)],
            ],
        };
        ComplexMatrix::from_rows(rows).unwrap()
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of one Pauli symbol per qubit, e.g. "XZI".
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(paulis: Vec<Pauli>) -> Self {
        Self(paulis)
    }

    /// Parses symbols like "IZ" or "XYZ".
    pub fn parse(label: &str) -> Result<Self> {
        label
            .chars()
            .map(|ch| match ch {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidParameter {
                    name: "pauli_string",
                    reason: format!("unknown symbol {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self(vec![Pauli::I; n_qubits])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    pub fn paulis(&self) -> &[Pauli] {
        &self.0
    }

    /// Full `2^n x 2^n` matrix of the string.
    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(1);
        for &p in &self.0 {
            m = m.kron(&p.matrix());
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        for &p in &self.0 {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

/// Real coefficients of a Hermitian matrix over the Pauli product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliDecomposition {
    n_qubits: usize,
    coefficients: BTreeMap<PauliString, f64>,
}

impl PauliDecomposition {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn insert(&mut self, string: PauliString, coefficient: f64) {
        assert_eq!(string.len(), self.n_qubits, "pauli string length mismatch");
        self.coefficients.insert(string, coefficient);
    }

    /// Coefficient for a string given by its label, zero when absent.
    pub fn coefficient(&self, label: &str) -> f64 {
        PauliString::parse(label)
            .ok()
            .and_then(|s| self.coefficients.get(&s).copied())
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, f64)> {
        self.coefficients.iter().map(|(s, &c)| (s, c))
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

fn n_qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NonPowerOfTwoDim(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Bit of the basis index belonging to `qubit` (qubit 0 is most significant).
fn index_bit(index: usize, qubit: usize, n_qubits: usize) -> usize {
    (index >> (n_qubits - 1 - qubit)) & 1
}

/// Expands a Hermitian matrix over the Pauli product basis.
///
/// Coefficients are `Tr(m P_s) / N`; strings with zero coefficient are
/// omitted. The dimension must be a power of two.
pub fn pauli_decompose(m: &ComplexMatrix) -> Result<PauliDecomposition> {
    let n = n_qubits_for_dim(m.dim())?;
    let dim = m.dim();
    let mut out = PauliDecomposition::new(n);

    let mut string = vec![Pauli::I; n];
    for code in 0..4usize.pow(n as u32) {
        let mut rest = code;
        let mut flip_mask = 0usize;
        for (k, slot) in string.iter_mut().enumerate() {
            *slot = match rest % 4 {
                0 => Pauli::I,
                1 => Pauli::X,
                2 => Pauli::Y,
                _ => Pauli::Z,
            };
            if matches!(slot, Pauli::X | Pauli::Y) {
                flip_mask |= 1 << (n - 1 - k);
            }
            rest /= 4;
        }

        // P_s has one nonzero entry per column: P_s[i ^ flip_mask][i].
        let mut trace = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            let j = i ^ flip_mask;
            trace += m[(i, j)] * pauli_entry(&string, j, i, n);
        }
        let coeff = trace.re / dim as f64;
        if coeff != 0.0 {
            out.insert(PauliString::new(string.clone()), coeff);
        }
    }
    Ok(out)
}

/// Entry `P_s[row][col]` assuming `row = col ^ flip_mask` for the string.
fn pauli_entry(string: &[Pauli], row: usize, col: usize, n: usize) -> Complex64 {
    let mut value = Complex64::new(1.0, 0.0);
    for (k, &p) in string.iter().enumerate() {
        let r = index_bit(row, k, n);
        let c = index_bit(col, k, n);
        value *= match p {
            Pauli::I => Complex64::new(1.0, 0.0),
            Pauli::X => Complex64::new(1.0, 0.0),
            Pauli::Y => {
                if c == 1 {
                    Complex64::new(0.0, -1.0)
                } else {
                    Complex64::new(0.0, 1.0)
                }
            }
            Pauli::Z => {
                if c == 1 {
                    Complex64::new(-1.0, 0.0)
                } else {
                    Complex64::new(1.0, 0.0)
                }
            }
        };
        let diagonal = matches!(p, Pauli::I | Pauli::Z);
        debug_assert_eq!(diagonal, r == c, "flip mask inconsistent with string");
    }
    value
}

/// Sums a Pauli decomposition back into a matrix.
pub fn pauli_reconstruct(d: &PauliDecomposition) -> ComplexMatrix {
    let n = d.n_qubits;
    let dim = 1usize << n;
    let mut m = ComplexMatrix::zeros(dim);
    for (string, coeff) in d.iter() {
        let mut flip_mask = 0usize;
        for (k, &p) in string.paulis().iter().enumerate() {
            if matches!(p, Pauli::X | Pauli::Y) {
                flip_mask |= 1 << (n - 1 - k);
            }
        }
        for i in 0..dim {
            let j = i ^ flip_mask;
            m[(j, i)] += pauli_entry(string.paulis(), j, i, n) * coeff;
        }
    }
    m
}

/// Real three-vector of Pauli expectations for a one-qubit state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Euclidean norm of the Bloch vector; 1 marks a pure state.
pub fn purity_norm(v: &BlochVector) -> f64 {
    v.norm()
}

/// Validated density matrix on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positive semidefiniteness.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n_qubits = n_qubits_for_dim(matrix.dim())?;
        let deviation = matrix.hermiticity_deviation();
        if deviation > tol::HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol::HERMITIAN_TOL || trace.im.abs() > tol::HERMITIAN_TOL {
            return Err(Error::NotAState {
                reason: format!("trace {} is not 1", trace),
            });
        }
        let eig = hermitian_eigensystem(&matrix)?;
        if eig.eigenvalues[0] < -tol::PSD_TOL {
            return Err(Error::NotAState {
                reason: format!("negative eigenvalue {:.3e}", eig.eigenvalues[0]),
            });
        }
        Ok(Self { n_qubits, matrix })
    }

    /// Wraps a matrix known valid by construction.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let n_qubits = n_qubits_for_dim(matrix.dim()).expect("dimension is a power of two");
        Self { n_qubits, matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Spectral decomposition of the state.
    pub fn eigensystem(&self) -> Eigensystem {
        hermitian_eigensystem(&self.matrix).expect("density matrix is Hermitian")
    }

    /// `Tr(rho^2)`, 1 for pure states.
    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).trace().re
    }

    /// Projector onto a (normalized) state vector.
    pub fn pure_from_vector(v: &[Complex64]) -> Result<Self> {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidParameter {
                name: "state_vector",
                reason: "zero vector".into(),
            });
        }
        let n_qubits = n_qubits_for_dim(v.len())?;
        let matrix = ComplexMatrix::from_fn(v.len(), |i, j| v[i] * v[j].conj() / (norm * norm));
        Ok(Self { n_qubits, matrix })
    }

    /// Identity over `2^n` scaled to unit trace.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self::from_matrix_unchecked(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }
}

/// One-qubit state `rho = (1 + v . sigma) / 2`.
///
/// Rejects Bloch vectors reaching outside the unit ball.
pub fn density_from_bloch(v: &BlochVector) -> Result<DensityMatrix> {
    let norm = v.norm();
    if norm > 1.0 + tol::HERMITIAN_TOL {
        return Err(Error::BlochNormExceedsOne { norm });
    }
    let c = Complex64::new;
    let matrix = ComplexMatrix::from_rows(vec![
        vec![c((1.0 + v.z) / 2.0, 0.0), c(v.x / 2.0, -v.y / 2.0)],
        vec![c(v.x / 2.0, v.y / 2.0), c((1.0 - v.z) / 2.0, 0.0)],
    ])
    .unwrap();
    Ok(DensityMatrix::from_matrix_unchecked(matrix))
}

/// Pauli expectations of a one-qubit state.
pub fn bloch_from_density(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho.dim(),
        });
    }
    let m = rho.matrix();
    Ok(BlochVector {
        x: 2.0 * m[(0, 1)].re,
        y: -2.0 * m[(0, 1)].im,
        z: m[(0, 0)].re - m[(1, 1)].re,
    })
}

/// Tensor product of two states; `left` becomes the leftmost factor.
pub fn tensor(left: &DensityMatrix, right: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(left.matrix().kron(right.matrix()))
}

/// Unitary gate validated against `U U^dag = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGate {
    matrix: ComplexMatrix,
}

impl UnitaryGate {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let product = matrix.mul(&matrix.dagger());
        let deviation = product.frobenius_distance(&ComplexMatrix::identity(matrix.dim()));
        if deviation > tol::UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Conjugation `U rho U^dag`.
pub fn apply_unitary(rho: &DensityMatrix, u: &UnitaryGate) -> Result<DensityMatrix> {
    if u.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: u.dim(),
        });
    }
    let m = u.matrix().mul(rho.matrix()).mul(&u.matrix().dagger());
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Deterministic Haar-like random unitary: seeded complex Gaussian entries
/// orthonormalized column by column (modified Gram-Schmidt).
pub fn random_unitary(seed: u64, dim: usize) -> UnitaryGate {
    let mut rng = RandomStream::new(seed);
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| Complex64::new(rng.gaussian(), rng.gaussian()))
                .collect()
        })
        .collect();

    for j in 0..dim {
        let (settled, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        for prev in settled.iter() {
            let proj: Complex64 = prev.iter().zip(col.iter()).map(|(p, c)| p.conj() * c).sum();
            for (c, p) in col.iter_mut().zip(prev.iter()) {
                *c -= proj * p;
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-12, "gaussian columns degenerate");
        for z in col.iter_mut() {
            *z /= norm;
        }
    }

    let matrix = ComplexMatrix::from_fn(dim, |i, j| cols[j][i]);
    UnitaryGate::new(matrix).expect("gram-schmidt output is unitary")
}

/// Deterministic full-rank random state `G G^dag / Tr(G G^dag)`.
pub fn random_density_matrix(seed: u64, n_qubits: usize) -> DensityMatrix {
    let dim = 1usize << n_qubits;
    let mut rng = RandomStream::new(seed);
    let g = ComplexMatrix::from_fn(dim, |_, _| Complex64::new(rng.gaussian(), rng.gaussian()));
    let product = g.mul(&g.dagger());
    let trace = product.trace().re;
    let m = product.scale(1.0 / trace);
    DensityMatrix::from_matrix_unchecked(m.add(&m.dagger()).scale(0.5))
}

/// Deterministic random pure state.
pub fn random_pure_state(seed: u64, n_qubits: usize) -> DensityMatrix {
    let dim = 1usize << n_qubits;
    let mut rng = RandomStream::new(seed);
    let v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gaussian(), rng.gaussian()))
        .collect();
    DensityMatrix::pure_from_vector(&v).expect("gaussian vector is nonzero")
}

/// Two-qubit singlet state `(|01> - |10>)(<01| - <10|) / 2`.
pub fn bell_singlet() -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4);
    m[(1, 1)] = Complex64::new(0.5, 0.0);
    m[(2, 2)] = Complex64::new(0.5, 0.0);
    m[(1, 2)] = Complex64::new(-0.5, 0.0);
    m[(2, 1)] = Complex64::new(-0.5, 0.0);
    DensityMatrix::from_matrix_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bloch_x_gives_uniform_half_matrix() {
        let rho = density_from_bloch(&BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.matrix()[(i, j)] - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn bloch_round_trip_on_y_state() {
        let rho = DensityMatrix::new(
            ComplexMatrix::from_rows(vec![
                vec![c(0.5, 0.0), c(0.0, -0.5)],
                vec![c(0.0, 0.5), c(0.5, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let v = bloch_from_density(&rho).unwrap();
        assert!((v.x).abs() < 1e-15);
        assert!((v.y - 1.0).abs() < 1e-15);
        assert!((v.z).abs() < 1e-15);
    }

    #[test]
    fn bloch_vector_outside_ball_rejected() {
        let v = BlochVector::new(0.8, 0.8, 0.0);
        assert!(matches!(
            density_from_bloch(&v),
            Err(Error::BlochNormExceedsOne { .. })
        ));
    }

    #[test]
    fn purity_norm_matches_trace_purity() {
        let v = BlochVector::new(0.3, -0.2, 0.5);
        let rho = density_from_bloch(&v).unwrap();
        let expected = (1.0 + purity_norm(&v).powi(2)) / 2.0;
        assert!((rho.purity() - expected).abs() < 1e-14);
    }

    #[test]
    fn tensor_of_up_and_down_is_ket_01() {
        let up = density_from_bloch(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let down = density_from_bloch(&BlochVector::new(0.0, 0.0, -1.0)).unwrap();
        let rho = tensor(&up, &down);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == 1 && j == 1 { 1.0 } else { 0.0 };
                assert!((rho.matrix()[(i, j)] - c(expected, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn singlet_pauli_coefficients() {
        let d = pauli_decompose(bell_singlet().matrix()).unwrap();
        assert_eq!(d.len(), 4);
        assert!((d.coefficient("II") - 0.25).abs() < 1e-15);
        assert!((d.coefficient("XX") + 0.25).abs() < 1e-15);
        assert!((d.coefficient("YY") + 0.25).abs() < 1e-15);
        assert!((d.coefficient("ZZ") + 0.25).abs() < 1e-15);
    }

    #[test]
    fn up_state_decomposes_into_half_i_plus_half_z() {
        let up = density_from_bloch(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let d = pauli_decompose(up.matrix()).unwrap();
        assert_eq!(d.len(), 2);
        assert!((d.coefficient("I") - 0.5).abs() < 1e-15);
        assert!((d.coefficient("Z") - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pauli_round_trip_on_random_hermitian() {
        for seed in 0..20u64 {
            let n = 1 + (seed % 3) as usize;
            let rho = random_density_matrix(seed, n);
            let d = pauli_decompose(rho.matrix()).unwrap();
            let back = pauli_reconstruct(&d);
            assert!(back.frobenius_distance(rho.matrix()) < 1e-12);
        }
    }

    #[test]
    fn pauli_string_matrix_matches_kron_of_factors() {
        let s = PauliString::parse("XZ").unwrap();
        let expected = Pauli::X.matrix().kron(&Pauli::Z.matrix());
        assert_eq!(s.matrix(), expected);
    }

    #[test]
    fn empty_decomposition_reconstructs_to_zero() {
        let d = PauliDecomposition::new(2);
        let m = pauli_reconstruct(&d);
        assert_eq!(m.frobenius_norm(), 0.0);
        assert_eq!(m.dim(), 4);
    }

    #[test]
    fn decompose_rejects_non_power_of_two() {
        let m = ComplexMatrix::identity(3);
        assert!(matches!(
            pauli_decompose(&m),
            Err(Error::NonPowerOfTwoDim(3))
        ));
    }

    #[test]
    fn singlet_spectrum_is_three_zeros_and_one() {
        let eig = bell_singlet().eigensystem();
        assert!(eig.eigenvalues[0].abs() < 1e-12);
        assert!(eig.eigenvalues[1].abs() < 1e-12);
        assert!(eig.eigenvalues[2].abs() < 1e-12);
        assert!((eig.eigenvalues[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_validation_rejects_negative_eigenvalue() {
        let m = ComplexMatrix::from_diagonal(&[1.5, -0.5]);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NotAState { .. })
        ));
    }

    #[test]
    fn density_validation_rejects_wrong_trace() {
        let m = ComplexMatrix::from_diagonal(&[0.6, 0.6]);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NotAState { .. })
        ));
    }

    #[test]
    fn apply_unitary_preserves_spectrum() {
        let rho = random_density_matrix(5, 2);
        let u = random_unitary(9, 4);
        let rotated = apply_unitary(&rho, &u).unwrap();
        let a = rho.eigensystem().eigenvalues;
        let b = rotated.eigensystem().eigenvalues;
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn apply_unitary_checks_dimension() {
        let rho = bell_singlet();
        let u = random_unitary(1, 2);
        assert!(matches!(
            apply_unitary(&rho, &u),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_unitary_is_deterministic_and_unitary() {
        let a = random_unitary(7, 4);
        let b = random_unitary(7, 4);
        assert_eq!(a.matrix(), b.matrix());
        let other = random_unitary(8, 4);
        assert!(a.matrix().frobenius_distance(other.matrix()) > 1e-3);
    }

    #[test]
    fn random_pure_state_has_unit_purity() {
        let rho = random_pure_state(3, 2);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
    }
}
