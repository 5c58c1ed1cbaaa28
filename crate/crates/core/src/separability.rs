//! Constructive separable decompositions.
//!
//! Any n-qubit state expands over products of spin projectors
//! `rho_axis^± = (1 ± sigma_axis)/2`. Negative product coefficients are
//! eliminated by booking, for each negative term, an equal positive weight
//! on the complementary sign patterns of the same axis tuple; the identity
//! balance left over after that bookkeeping is the deficit `x`, and
//! `sigma = (rho + x 1) / (1 + N x)` is separable with `rho = A_a(sigma)`,
//! `a = 1 + N x`.
//!
//! Before paying for eliminations, two cheaper settlements are tried: the
//! identity mass netted into z-axis products, then netted uniformly across
//! the three axes. Either one succeeding means the state is separable as
//! written (`x = 0`), which keeps already-separable inputs at `a = 1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::affine::{affine_apply, AffineMap};
use crate::eigen::hermitian_eigensystem;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::qstate::{pauli_decompose, DensityMatrix, PauliDecomposition};
use crate::tol;

/// Spin axis of a projector factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn unit_vector(self) -> [f64; 3] {
        match self {
            Axis::X => [1.0, 0.0, 0.0],
            Axis::Y => [0.0, 1.0, 0.0],
            Axis::Z => [0.0, 0.0, 1.0],
        }
    }

    fn symbol(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

/// Projector orientation along its axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One-qubit spin projector `(1 ± sigma_axis)/2`, written e.g. "z+".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AxisProjector {
    pub axis: Axis,
    pub sign: Sign,
}

impl AxisProjector {
    pub fn new(axis: Axis, sign: Sign) -> Self {
        Self { axis, sign }
    }

    pub fn parse(label: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter {
            name: "axis_projector",
            reason: format!("expected e.g. \"z+\", got {label:?}"),
        };
        let mut chars = label.chars();
        let axis = match chars.next().ok_or_else(bad)? {
            'x' => Axis::X,
            'y' => Axis::Y,
            'z' => Axis::Z,
            _ => return Err(bad()),
        };
        let sign = match chars.next().ok_or_else(bad)? {
            '+' => Sign::Plus,
            '-' => Sign::Minus,
            _ => return Err(bad()),
        };
        if chars.next().is_some() {
            return Err(bad());
        }
        Ok(Self { axis, sign })
    }

    /// Bloch vector of the projected state, `± e_axis`.
    pub fn bloch(self) -> [f64; 3] {
        let [x, y, z] = self.axis.unit_vector();
        let s = self.sign.factor();
        [s * x, s * y, s * z]
    }
}

impl fmt::Display for AxisProjector {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}{}", self.axis.symbol(), self.sign.symbol())
    }
}

impl Serialize for AxisProjector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AxisProjector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let label = String::deserialize(d)?;
        AxisProjector::parse(&label).map_err(serde::de::Error::custom)
    }
}

/// `2x2` matrix of a spin projector.
pub fn projector_matrix(p: AxisProjector) -> ComplexMatrix {
    use num_complex::Complex64;
    let [x, y, z] = p.bloch();
    let c = Complex64::new;
    ComplexMatrix::from_rows(vec![
        vec![c((1.0 + z) / 2.0, 0.0), c(x / 2.0, -y / 2.0)],
        vec![c(x / 2.0, y / 2.0), c((1.0 - z) / 2.0, 0.0)],
    ])
    .unwrap()
}

/// Weighted product of one projector per qubit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductTerm {
    #[serde(rename = "weight")]
    pub coefficient: f64,
    pub factors: Vec<AxisProjector>,
}

impl ProductTerm {
    pub fn new(coefficient: f64, factors: Vec<AxisProjector>) -> Self {
        Self {
            coefficient,
            factors,
        }
    }

    /// Unit-trace tensor product of the factors (coefficient not applied).
    pub fn projector_product(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(1);
        for &f in &self.factors {
            m = m.kron(&projector_matrix(f));
        }
        m
    }
}

/// Sums `coefficient * product` over terms.
fn terms_matrix(terms: &[ProductTerm], dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for t in terms {
        m = m.add(&t.projector_product().scale(t.coefficient));
    }
    m
}

/// A Hermitian matrix rewritten over projector products.
///
/// `terms` covers every non-identity Pauli string; the all-identity
/// coefficient is kept aside as `identity_mass`, so the original matrix is
/// `sum(terms) + identity_mass * 1`.
#[derive(Clone, Debug)]
pub struct ProductExpansion {
    pub n_qubits: usize,
    pub terms: Vec<ProductTerm>,
    pub identity_mass: f64,
}

type FactorMap = BTreeMap<Vec<AxisProjector>, f64>;

fn map_into_terms(map: FactorMap) -> Vec<ProductTerm> {
    map.into_iter()
        .filter(|(_, c)| c.abs() > tol::CONSOLIDATION_TOL)
        .map(|(factors, c)| ProductTerm::new(c, factors))
        .collect()
}

/// Rewrites a Pauli decomposition over spin-projector products.
///
/// Each `sigma_axis` splits as `rho_axis^+ - rho_axis^-` and each identity
/// factor inside a non-identity string as `rho_z^+ + rho_z^-`; like factor
/// lists consolidate and coefficients within `CONSOLIDATION_TOL` of zero
/// are dropped. At most `6^n` terms survive.
pub fn product_basis_expand(d: &PauliDecomposition) -> ProductExpansion {
    use crate::qstate::Pauli;

    let n = d.n_qubits();
    let mut identity_mass = 0.0;
    let mut map: FactorMap = BTreeMap::new();

    for (string, coeff) in d.iter() {
        if string.is_identity() {
            identity_mass += coeff;
            continue;
        }
        let axes: Vec<Axis> = string
            .paulis()
            .iter()
            .map(|p| match p {
                Pauli::I | Pauli::Z => Axis::Z,
                Pauli::X => Axis::X,
                Pauli::Y => Axis::Y,
            })
            .collect();
        for pattern in 0..(1usize << n) {
            let mut factors = Vec::with_capacity(n);
            let mut weight = coeff;
            for (k, (&axis, &pauli)) in axes.iter().zip(string.paulis()).enumerate() {
                let sign = if (pattern >> (n - 1 - k)) & 1 == 0 {
                    Sign::Plus
                } else {
                    Sign::Minus
                };
                if pauli != Pauli::I {
                    weight *= sign.factor();
                }
                factors.push(AxisProjector::new(axis, sign));
            }
            *map.entry(factors).or_insert(0.0) += weight;
        }
    }

    ProductExpansion {
        n_qubits: n,
        terms: map_into_terms(map),
        identity_mass,
    }
}

/// Outcome of negative-term elimination: all-nonnegative terms plus the
/// identity deficit `x` spent doing it.
///
/// Satisfies `sum(terms) - x * 1 = sum(input terms) + identity_mass * 1`.
#[derive(Clone, Debug)]
pub struct EliminationResult {
    pub terms: Vec<ProductTerm>,
    pub identity_deficit: f64,
}

/// Every sign pattern of projectors over the given axes.
fn sign_patterns(axes: &[Axis]) -> Vec<Vec<AxisProjector>> {
    let n = axes.len();
    (0..(1usize << n))
        .map(|pattern| {
            axes.iter()
                .enumerate()
                .map(|(k, &axis)| {
                    let sign = if (pattern >> (n - 1 - k)) & 1 == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    };
                    AxisProjector::new(axis, sign)
                })
                .collect()
        })
        .collect()
}

/// Keeps the map only if every coefficient is nonnegative (within
/// `CONSOLIDATION_TOL`, which gets clamped to zero).
fn settle(map: FactorMap) -> Option<Vec<ProductTerm>> {
    if map.values().any(|&c| c < -tol::CONSOLIDATION_TOL) {
        return None;
    }
    let clamped = map.into_iter().map(|(f, c)| (f, c.max(0.0))).collect();
    Some(map_into_terms(clamped))
}

/// Removes negative coefficients from a product expansion.
///
/// Two settlements are tried first, each absorbing the identity mass
/// without cost: expansion along z-axis products, then uniformly across
/// the three axes. If either leaves every coefficient nonnegative the
/// deficit is zero. Otherwise each negative term of weight `-c` is deleted
/// by adding `c` to every other sign pattern of its axis tuple (which costs
/// `c` of identity), and whatever the identity mass cannot cover becomes
/// the deficit `x`.
pub fn eliminate_negatives(expansion: &ProductExpansion) -> EliminationResult {
    let n = expansion.n_qubits;
    let base: FactorMap = expansion
        .terms
        .iter()
        .map(|t| (t.factors.clone(), t.coefficient))
        .collect();

    // Settlement 1: identity mass as a sum of z-axis products.
    let mut netted = base.clone();
    for pattern in sign_patterns(&vec![Axis::Z; n]) {
        *netted.entry(pattern).or_insert(0.0) += expansion.identity_mass;
    }
    if let Some(terms) = settle(netted) {
        return EliminationResult {
            terms,
            identity_deficit: 0.0,
        };
    }

    // Settlement 2: identity mass split evenly over the three axes.
    let mut netted = base.clone();
    for axis in Axis::ALL {
        for pattern in sign_patterns(&vec![axis; n]) {
            *netted.entry(pattern).or_insert(0.0) += expansion.identity_mass / 3.0;
        }
    }
    if let Some(terms) = settle(netted) {
        return EliminationResult {
            terms,
            identity_deficit: 0.0,
        };
    }

    // Elimination proper: pay for each negative term out of the identity
    // account. Charges are computed against the input coefficients, so the
    // replacement weights landing on other negative cells do not reduce
    // what those cells pay.
    let mut ledger: FactorMap = BTreeMap::new();
    let mut charges = 0.0;
    for (factors, coeff) in &base {
        if *coeff >= 0.0 {
            *ledger.entry(factors.clone()).or_insert(0.0) += coeff;
            continue;
        }
        let charge = -coeff;
        charges += charge;
        let axes: Vec<Axis> = factors.iter().map(|f| f.axis).collect();
        for pattern in sign_patterns(&axes) {
            if pattern != *factors {
                *ledger.entry(pattern).or_insert(0.0) += charge;
            }
        }
    }

    let account = expansion.identity_mass - charges;
    let identity_deficit = if account >= 0.0 {
        for pattern in sign_patterns(&vec![Axis::Z; n]) {
            *ledger.entry(pattern).or_insert(0.0) += account;
        }
        0.0
    } else {
        -account
    };

    EliminationResult {
        terms: map_into_terms(ledger),
        identity_deficit,
    }
}

/// Affine parameter implied by an identity deficit: `a = 1 + N x`.
pub fn affine_parameter_from_deficit(deficit: f64, dim: usize) -> f64 {
    1.0 + dim as f64 * deficit
}

/// Convex mixture of projector products related to the original state by
/// `rho = A_a(sigma)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparableDecomposition {
    pub n_qubits: usize,
    /// Affine parameter mapping the mixture back onto the original state.
    pub a: f64,
    /// Nonnegative weights summing to one, with their projector products.
    pub terms: Vec<ProductTerm>,
}

impl SeparableDecomposition {
    /// The separable mixture `sigma` itself.
    pub fn sigma_matrix(&self) -> ComplexMatrix {
        terms_matrix(&self.terms, 1usize << self.n_qubits)
    }

    /// `A_a(sigma)`, which reproduces the decomposed state.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = 1usize << self.n_qubits;
        let map = AffineMap { a: self.a, dim };
        affine_apply(&map, &self.sigma_matrix()).expect("dimensions agree by construction")
    }

    pub fn weights(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.coefficient).collect()
    }
}

/// Decomposes any state as `rho = A_a(sigma)` with `sigma` an explicit
/// separable mixture: Pauli expansion, projector products, negative-term
/// elimination, then normalization by `1 + N x`.
pub fn separate(rho: &DensityMatrix) -> Result<SeparableDecomposition> {
    let d = pauli_decompose(rho.matrix())?;
    let expansion = product_basis_expand(&d);
    let eliminated = eliminate_negatives(&expansion);
    let dim = rho.dim();
    let a = affine_parameter_from_deficit(eliminated.identity_deficit, dim);
    let scale = 1.0 / (1.0 + dim as f64 * eliminated.identity_deficit);
    let terms = eliminated
        .terms
        .into_iter()
        .map(|t| ProductTerm::new(t.coefficient * scale, t.factors))
        .collect();
    Ok(SeparableDecomposition {
        n_qubits: rho.n_qubits(),
        a,
        terms,
    })
}

/// The fixed six-term mixture of opposite spin pairs over the three axes.
///
/// Its `sigma` is the state whose z-z statistics a fair three-sided die
/// pair would produce, and `A_3(sigma)` is exactly the singlet.
pub fn qdice_decomposition() -> SeparableDecomposition {
    let pairs = [
        (Axis::Z, Sign::Plus, Sign::Minus),
        (Axis::Z, Sign::Minus, Sign::Plus),
        (Axis::X, Sign::Plus, Sign::Minus),
        (Axis::X, Sign::Minus, Sign::Plus),
        (Axis::Y, Sign::Plus, Sign::Minus),
        (Axis::Y, Sign::Minus, Sign::Plus),
    ];
    let terms = pairs
        .into_iter()
        .map(|(axis, s1, s2)| {
            ProductTerm::new(
                1.0 / 6.0,
                vec![AxisProjector::new(axis, s1), AxisProjector::new(axis, s2)],
            )
        })
        .collect();
    SeparableDecomposition {
        n_qubits: 2,
        a: 3.0,
        terms,
    }
}

/// The state of `qdice_decomposition`, `sigma = (singlet + 1/2) / 3`.
pub fn qdice_sigma() -> DensityMatrix {
    DensityMatrix::new(qdice_decomposition().sigma_matrix())
        .expect("qdice mixture is a valid state")
}

/// Transpose on the second tensor factor of a two-qubit matrix.
pub fn partial_transpose(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: m.dim(),
        });
    }
    Ok(ComplexMatrix::from_fn(4, |i, j| {
        let (i0, i1) = (i / 2, i % 2);
        let (j0, j1) = (j / 2, j % 2);
        m[(i0 * 2 + j1, j0 * 2 + i1)]
    }))
}

/// Smallest eigenvalue of the partial transpose; negative values witness
/// entanglement for two qubits.
pub fn partial_transpose_min_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(Error::NotTwoQubit(rho.n_qubits()));
    }
    let pt = partial_transpose(rho.matrix())?;
    let eig = hermitian_eigensystem(&pt)?;
    Ok(eig.eigenvalues[0])
}

/// Smallest `a >= 1` such that `A_{1/a}(rho)` passes the partial-transpose
/// test, found by bisection on `[1, 4^n]` to within `search_tol`.
///
/// Two qubits only; returns exactly 1 for already-separable input. This is
/// the tight benchmark the constructive `separate` parameter can be
/// compared against.
pub fn minimal_mixing_parameter(rho: &DensityMatrix, search_tol: f64) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(Error::NotTwoQubit(rho.n_qubits()));
    }
    if search_tol.is_nan() || search_tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "search_tol",
            reason: format!("must be positive, got {search_tol}"),
        });
    }
    let dim = rho.dim();
    let passes = |a: f64| -> Result<bool> {
        let map = AffineMap { a: 1.0 / a, dim };
        let mixed = affine_apply(&map, rho.matrix())?;
        let eig = hermitian_eigensystem(&partial_transpose(&mixed)?)?;
        Ok(eig.eigenvalues[0] >= -tol::PSD_TOL)
    };

    if passes(1.0)? {
        return Ok(1.0);
    }
    let mut lo = 1.0;
    let mut hi = (dim * dim) as f64;
    debug_assert!(passes(hi).unwrap_or(false));
    while hi - lo > search_tol {
        let mid = 0.5 * (lo + hi);
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bell_singlet, random_density_matrix, PauliString};

    fn expansion_matrix(e: &ProductExpansion) -> ComplexMatrix {
        let dim = 1usize << e.n_qubits;
        terms_matrix(&e.terms, dim).add(&ComplexMatrix::identity(dim).scale(e.identity_mass))
    }

    fn decomposition(entries: &[(&str, f64)], n: usize) -> PauliDecomposition {
        let mut d = PauliDecomposition::new(n);
        for (label, c) in entries {
            d.insert(PauliString::parse(label).unwrap(), *c);
        }
        d
    }

    #[test]
    fn projector_matrices_match_bloch_form() {
        use num_complex::Complex64;
        let m = projector_matrix(AxisProjector::parse("x-").unwrap());
        assert!((m[(0, 0)] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((m[(0, 1)] - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        let plus = projector_matrix(AxisProjector::parse("y+").unwrap());
        let minus = projector_matrix(AxisProjector::parse("y-").unwrap());
        assert!(
            plus.add(&minus)
                .frobenius_distance(&ComplexMatrix::identity(2))
                < 1e-15
        );
    }

    #[test]
    fn projector_labels_round_trip() {
        for label in ["x+", "x-", "y+", "y-", "z+", "z-"] {
            assert_eq!(AxisProjector::parse(label).unwrap().to_string(), label);
        }
        assert!(AxisProjector::parse("w+").is_err());
        assert!(AxisProjector::parse("z").is_err());
    }

    #[test]
    fn expand_splits_single_pauli_product() {
        let d = decomposition(&[("XX", -0.25)], 2);
        let e = product_basis_expand(&d);
        assert_eq!(e.identity_mass, 0.0);
        assert_eq!(e.terms.len(), 4);
        for t in &e.terms {
            let same_sign = t.factors[0].sign == t.factors[1].sign;
            let expected = if same_sign { -0.25 } else { 0.25 };
            assert!((t.coefficient - expected).abs() < 1e-15);
            assert!(t.factors.iter().all(|f| f.axis == Axis::X));
        }
    }

    #[test]
    fn expand_holds_identity_mass_aside() {
        let d = decomposition(&[("I", 0.5), ("Z", 0.5)], 1);
        let e = product_basis_expand(&d);
        assert!((e.identity_mass - 0.5).abs() < 1e-15);
        assert_eq!(e.terms.len(), 2);
        assert!(
            expansion_matrix(&e).frobenius_distance(&crate::qstate::pauli_reconstruct(&d)) < 1e-14
        );
    }

    #[test]
    fn singlet_expansion_has_six_negative_quarters() {
        let d = pauli_decompose(bell_singlet().matrix()).unwrap();
        let e = product_basis_expand(&d);
        assert!((e.identity_mass - 0.25).abs() < 1e-15);
        assert_eq!(e.terms.len(), 12);
        let negatives: Vec<_> = e.terms.iter().filter(|t| t.coefficient < 0.0).collect();
        assert_eq!(negatives.len(), 6);
        for t in negatives {
            assert!((t.coefficient + 0.25).abs() < 1e-15);
            assert_eq!(t.factors[0].axis, t.factors[1].axis);
            assert_eq!(t.factors[0].sign, t.factors[1].sign);
        }
        assert!(expansion_matrix(&e).frobenius_distance(bell_singlet().matrix()) < 1e-14);
    }

    #[test]
    fn expansion_reconstructs_random_states() {
        for seed in 0..10u64 {
            let n = 1 + (seed % 3) as usize;
            let rho = random_density_matrix(seed + 40, n);
            let d = pauli_decompose(rho.matrix()).unwrap();
            let e = product_basis_expand(&d);
            assert!(e.terms.len() <= 6usize.pow(n as u32));
            assert!(expansion_matrix(&e).frobenius_distance(rho.matrix()) < 1e-12);
        }
    }

    #[test]
    fn eliminate_passes_through_nonnegative_terms() {
        let e = ProductExpansion {
            n_qubits: 1,
            terms: vec![ProductTerm::new(
                1.0,
                vec![AxisProjector::parse("z+").unwrap()],
            )],
            identity_mass: 0.0,
        };
        let r = eliminate_negatives(&e);
        assert_eq!(r.identity_deficit, 0.0);
        assert_eq!(r.terms.len(), 1);
        assert!((r.terms[0].coefficient - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eliminate_charges_isolated_negative_term() {
        let factors = vec![
            AxisProjector::parse("x+").unwrap(),
            AxisProjector::parse("x+").unwrap(),
        ];
        let e = ProductExpansion {
            n_qubits: 2,
            terms: vec![ProductTerm::new(-0.25, factors.clone())],
            identity_mass: 0.0,
        };
        let r = eliminate_negatives(&e);
        assert!((r.identity_deficit - 0.25).abs() < 1e-15);
        assert_eq!(r.terms.len(), 3);
        for t in &r.terms {
            assert!((t.coefficient - 0.25).abs() < 1e-15);
            assert_ne!(t.factors, factors);
            assert!(t.factors.iter().all(|f| f.axis == Axis::X));
        }
    }

    #[test]
    fn eliminate_preserves_the_matrix() {
        let d = pauli_decompose(bell_singlet().matrix()).unwrap();
        let e = product_basis_expand(&d);
        let r = eliminate_negatives(&e);
        let rebuilt =
            terms_matrix(&r.terms, 4).sub(&ComplexMatrix::identity(4).scale(r.identity_deficit));
        assert!(rebuilt.frobenius_distance(bell_singlet().matrix()) < 1e-12);
    }

    #[test]
    fn singlet_elimination_deficit_is_five_quarters() {
        let d = pauli_decompose(bell_singlet().matrix()).unwrap();
        let r = eliminate_negatives(&product_basis_expand(&d));
        assert!((r.identity_deficit - 1.25).abs() < 1e-12);
        assert_eq!(r.terms.len(), 12);
    }

    #[test]
    fn separate_singlet_matches_worked_decomposition() {
        let dec = separate(&bell_singlet()).unwrap();
        assert!((dec.a - 6.0).abs() < 1e-12);
        assert_eq!(dec.terms.len(), 12);
        let total: f64 = dec.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        for t in &dec.terms {
            assert_eq!(t.factors[0].axis, t.factors[1].axis);
            let expected = if t.factors[0].sign == t.factors[1].sign {
                1.0 / 24.0
            } else {
                1.0 / 8.0
            };
            assert!((t.coefficient - expected).abs() < 1e-12);
        }
        assert!(
            dec.reconstruct()
                .frobenius_distance(bell_singlet().matrix())
                < 1e-10
        );
    }

    #[test]
    fn separate_keeps_product_state_at_unit_parameter() {
        use crate::qstate::{density_from_bloch, tensor, BlochVector};
        let up = density_from_bloch(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let rho = tensor(&up, &up);
        let dec = separate(&rho).unwrap();
        assert!((dec.a - 1.0).abs() < 1e-12);
        assert_eq!(dec.terms.len(), 1);
        assert!((dec.terms[0].coefficient - 1.0).abs() < 1e-12);
        assert_eq!(
            dec.terms[0].factors,
            vec![
                AxisProjector::parse("z+").unwrap(),
                AxisProjector::parse("z+").unwrap()
            ]
        );
    }

    #[test]
    fn separate_maximally_mixed_gives_four_z_products() {
        let dec = separate(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert!((dec.a - 1.0).abs() < 1e-12);
        assert_eq!(dec.terms.len(), 4);
        for t in &dec.terms {
            assert!((t.coefficient - 0.25).abs() < 1e-12);
            assert!(t.factors.iter().all(|f| f.axis == Axis::Z));
        }
    }

    #[test]
    fn separate_recognizes_qdice_sigma_as_separable() {
        let dec = separate(&qdice_sigma()).unwrap();
        assert!((dec.a - 1.0).abs() < 1e-12);
        assert_eq!(dec.terms.len(), 6);
        for t in &dec.terms {
            assert!((t.coefficient - 1.0 / 6.0).abs() < 1e-12);
            assert_eq!(t.factors[0].axis, t.factors[1].axis);
            assert_ne!(t.factors[0].sign, t.factors[1].sign);
        }
    }

    #[test]
    fn separate_reconstructs_random_states() {
        for seed in 0..8u64 {
            let n = 1 + (seed % 2) as usize;
            let rho = random_density_matrix(seed + 90, n);
            let dec = separate(&rho).unwrap();
            assert!(dec.reconstruct().frobenius_distance(rho.matrix()) < 1e-10);
            assert!(dec.weights().iter().all(|&w| w >= -1e-12));
            let total: f64 = dec.weights().iter().sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn qdice_mixture_rescales_to_the_singlet() {
        let dec = qdice_decomposition();
        assert!((dec.a - 3.0).abs() < 1e-15);
        assert!(
            dec.reconstruct()
                .frobenius_distance(bell_singlet().matrix())
                < 1e-12
        );
    }

    #[test]
    fn qdice_sigma_diagonal_is_one_sixth_table() {
        let sigma = qdice_sigma();
        let expected = [1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0];
        for (i, want) in expected.iter().enumerate() {
            assert!((sigma.matrix()[(i, i)].re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let rho = random_density_matrix(17, 2);
        let once = partial_transpose(rho.matrix()).unwrap();
        let twice = partial_transpose(&once).unwrap();
        assert!(twice.frobenius_distance(rho.matrix()) < 1e-15);
    }

    #[test]
    fn singlet_partial_transpose_eigenvalue_is_minus_half() {
        let min = partial_transpose_min_eigenvalue(&bell_singlet()).unwrap();
        assert!((min + 0.5).abs() < 1e-12);
    }

    #[test]
    fn separable_states_pass_partial_transpose() {
        let min = partial_transpose_min_eigenvalue(&qdice_sigma()).unwrap();
        assert!(min >= -1e-12);
        let mixed = partial_transpose_min_eigenvalue(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert!((mixed - 0.25).abs() < 1e-12);
    }

    #[test]
    fn minimal_mixing_for_singlet_is_three() {
        let a = minimal_mixing_parameter(&bell_singlet(), 1e-6).unwrap();
        assert!((a - 3.0).abs() < 1e-5);
    }

    #[test]
    fn minimal_mixing_for_separable_states_is_one() {
        assert_eq!(minimal_mixing_parameter(&qdice_sigma(), 1e-6).unwrap(), 1.0);
        assert_eq!(
            minimal_mixing_parameter(&DensityMatrix::maximally_mixed(2), 1e-6).unwrap(),
            1.0
        );
    }

    #[test]
    fn minimal_mixing_rejects_wrong_qubit_count() {
        let rho = random_density_matrix(3, 1);
        assert!(matches!(
            minimal_mixing_parameter(&rho, 1e-6),
            Err(Error::NotTwoQubit(1))
        ));
    }

    #[test]
    fn constructive_parameter_bounds_the_minimal_one() {
        for seed in 0..6u64 {
            let rho = random_density_matrix(seed + 200, 2);
            let constructive = separate(&rho).unwrap().a;
            let minimal = minimal_mixing_parameter(&rho, 1e-6).unwrap();
            assert!(constructive >= minimal - 1e-5);
        }
    }

    #[test]
    fn decomposition_json_round_trip() {
        let dec = qdice_decomposition();
        let text = serde_json::to_string(&dec).unwrap();
        assert!(text.contains("\"weight\""));
        assert!(text.contains("\"z+\""));
        let back: SeparableDecomposition = serde_json::from_str(&text).unwrap();
        assert!(back.sigma_matrix().frobenius_distance(&dec.sigma_matrix()) < 1e-15);
        assert_eq!(back.a, dec.a);
    }
}
