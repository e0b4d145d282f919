//! Labelled multipartite density matrices.
//!
//! A [`DensityMatrix`] couples a [`SystemShape`] — an ordered list of
//! labelled subsystems — with a dense operator whose physical invariants
//! (Hermiticity, unit trace, positivity up to round-off) are checked at
//! construction time, so every value of the type is a usable state.
//!
//! Index convention: the first subsystem owns the most significant index,
//! i.e. basis vector `|i_A i_B>` maps to row `i_A * dim_B + i_B`.
//!
//! Besides the canonical fixtures (Bell pairs, GHZ states, classical
//! mixtures, products) the module provides seeded random ensembles for
//! testing and a versioned JSON state-file format that round-trips
//! matrices bit-exactly.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Deserialize;
use thiserror::Error;

use crate::linmath::{
    self, hermitian_eig, kron, partial_trace, ComplexMatrix, LinmathError,
};

/// Largest allowed total Hilbert-space dimension for [`SystemShape::new`].
pub const DEFAULT_DIM_LIMIT: usize = 4096;

/// Tolerance on `|Tr(rho) - 1|`.
pub const TRACE_TOL: f64 = 1e-9;

/// Smallest admissible eigenvalue; anything below is genuine negativity.
pub const EIGENVALUE_FLOOR: f64 = -1e-9;

/// State-file format version written by [`save_state`].
pub const STATE_FILE_VERSION: u32 = 1;

/// Physical invariant checked by [`DensityMatrix::new`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariant {
    Hermiticity,
    Trace,
    Positivity,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Invariant::Hermiticity => "hermiticity",
            Invariant::Trace => "trace",
            Invariant::Positivity => "positivity",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum QstateError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("state vector norm is {norm}, expected 1 within 1e-9")]
    NormError { norm: f64 },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("index {index} out of range (bound {bound})")]
    IndexError { index: usize, bound: usize },
    #[error("total dimension {dim} exceeds limit {limit}")]
    LimitExceeded { dim: usize, limit: usize },
    #[error("duplicate basis index {0}")]
    DuplicateIndex(usize),
    #[error("label {0:?} appears in more than one factor")]
    LabelClash(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("keep set must not be empty")]
    EmptyKeep,
    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse {path}: {detail}")]
    ParseError { path: String, detail: String },
    #[error("{invariant} invariant violated (measured {measured:.6e})")]
    InvariantError { invariant: Invariant, measured: f64 },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Linmath(#[from] LinmathError),
}

/// One labelled subsystem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub label: String,
    pub dim: usize,
}

/// Ordered list of labelled subsystems making up a composite system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemShape {
    parts: Vec<Part>,
}

impl SystemShape {
    /// Builds a shape from `(label, dim)` pairs, enforcing the default
    /// total-dimension limit of [`DEFAULT_DIM_LIMIT`].
    pub fn new(parts: &[(&str, usize)]) -> Result<Self, QstateError> {
        Self::new_with_limit(parts, DEFAULT_DIM_LIMIT)
    }

    /// Like [`SystemShape::new`] with an explicit total-dimension limit.
    pub fn new_with_limit(parts: &[(&str, usize)], limit: usize) -> Result<Self, QstateError> {
        if parts.is_empty() {
            return Err(QstateError::InvalidShape("no subsystems given".into()));
        }
        for (label, dim) in parts {
            if label.is_empty() {
                return Err(QstateError::InvalidShape("empty label".into()));
            }
            if *dim < 2 {
                return Err(QstateError::InvalidShape(format!(
                    "subsystem {label:?} has dimension {dim}, need at least 2"
                )));
            }
        }
        for (k, (label, _)) in parts.iter().enumerate() {
            if parts[..k].iter().any(|(other, _)| other == label) {
                return Err(QstateError::InvalidShape(format!(
                    "label {label:?} appears twice"
                )));
            }
        }
        let total = parts
            .iter()
            .fold(1usize, |acc, (_, dim)| acc.saturating_mul(*dim));
        if total > limit {
            return Err(QstateError::LimitExceeded { dim: total, limit });
        }
        Ok(Self {
            parts: parts
                .iter()
                .map(|(label, dim)| Part {
                    label: (*label).to_string(),
                    dim: *dim,
                })
                .collect(),
        })
    }

    /// Shape made of qubits with the given labels.
    pub fn qubits(labels: &[&str]) -> Result<Self, QstateError> {
        let parts: Vec<(&str, usize)> = labels.iter().map(|&l| (l, 2)).collect();
        Self::new(&parts)
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.parts.iter().map(|p| p.label.as_str()).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim).product()
    }

    pub fn position_of(&self, label: &str) -> Option<usize> {
        self.parts.iter().position(|p| p.label == label)
    }

    /// Positions of the given labels, sorted ascending (shape order).
    /// Labels may be listed in any order but must be distinct and known.
    pub fn subset_positions(&self, labels: &[&str]) -> Result<Vec<usize>, QstateError> {
        let mut positions = Vec::with_capacity(labels.len());
        for &label in labels {
            let p = self
                .position_of(label)
                .ok_or_else(|| QstateError::UnknownLabel(label.to_string()))?;
            if positions.contains(&p) {
                return Err(QstateError::InvalidArgument(format!(
                    "label {label:?} listed twice"
                )));
            }
            positions.push(p);
        }
        positions.sort_unstable();
        Ok(positions)
    }

    /// Sub-shape made of the factors at the given (ascending) positions.
    pub fn restrict(&self, positions: &[usize]) -> Self {
        Self {
            parts: positions.iter().map(|&p| self.parts[p].clone()).collect(),
        }
    }
}

impl fmt::Display for SystemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, part) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{}({})", part.label, part.dim)?;
        }
        Ok(())
    }
}

/// Classical probability distribution: entries in `[0, 1]` summing to one
/// within `1e-9`. Round-off negatives above `-1e-12` are clipped to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self, QstateError> {
        if probs.is_empty() {
            return Err(QstateError::InvalidProbability("empty vector".into()));
        }
        let mut clipped = Vec::with_capacity(probs.len());
        for (k, &p) in probs.iter().enumerate() {
            if !p.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(QstateError::InvalidProbability(format!(
                    "entry {k} is {p}, outside [0, 1]"
                )));
            }
            clipped.push(p.clamp(0.0, 1.0));
        }
        let sum: f64 = clipped.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(QstateError::InvalidProbability(format!(
                "entries sum to {sum}, expected 1 within 1e-9"
            )));
        }
        Ok(Self { probs: clipped })
    }

    /// Uniform distribution over `n` outcomes.
    pub fn uniform(n: usize) -> Result<Self, QstateError> {
        if n == 0 {
            return Err(QstateError::InvalidProbability("empty vector".into()));
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }
}

/// Validated density matrix over a labelled composite system.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    shape: SystemShape,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and wraps an operator as a physical state.
    ///
    /// Checks, in order: the matrix dimension matches the shape, the trace
    /// is 1 within [`TRACE_TOL`], the matrix is Hermitian within
    /// `1e-9 * dim` in Frobenius norm, and the smallest eigenvalue is at
    /// least [`EIGENVALUE_FLOOR`].
    pub fn new(shape: SystemShape, mat: ComplexMatrix) -> Result<Self, QstateError> {
        if !mat.is_square() || mat.rows() != shape.total_dim() {
            return Err(QstateError::DimMismatch(format!(
                "shape {shape} has total dimension {}, matrix is {}x{}",
                shape.total_dim(),
                mat.rows(),
                mat.cols()
            )));
        }
        let trace_dev = (mat.trace() - Complex64::new(1.0, 0.0)).norm();
        if trace_dev > TRACE_TOL {
            return Err(QstateError::InvariantError {
                invariant: Invariant::Trace,
                measured: trace_dev,
            });
        }
        let residual = mat.hermiticity_residual();
        let herm_tol = linmath::HERMITICITY_TOL * mat.dim() as f64;
        if residual > herm_tol {
            return Err(QstateError::InvariantError {
                invariant: Invariant::Hermiticity,
                measured: residual,
            });
        }
        let eig = hermitian_eig(&mat)?;
        let min_eig = eig.eigenvalues[0];
        if min_eig < EIGENVALUE_FLOOR {
            return Err(QstateError::InvariantError {
                invariant: Invariant::Positivity,
                measured: min_eig,
            });
        }
        Ok(Self { shape, mat })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eig(&self.mat)
            .expect("validated density matrix is Hermitian")
            .eigenvalues
    }

    /// Pure state `|psi><psi|` from amplitudes in the computational basis.
    pub fn from_pure(amplitudes: &[Complex64], shape: SystemShape) -> Result<Self, QstateError> {
        if amplitudes.len() != shape.total_dim() {
            return Err(QstateError::DimMismatch(format!(
                "{} amplitudes for shape {shape} of total dimension {}",
                amplitudes.len(),
                shape.total_dim()
            )));
        }
        let norm = amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(QstateError::NormError { norm });
        }
        let n = amplitudes.len();
        let mat = ComplexMatrix::from_fn(n, n, |i, j| amplitudes[i] * amplitudes[j].conj());
        Self::new(shape, mat)
    }

    /// The four Bell pairs on qubits `A`, `B`:
    /// index 0 is `(|00> + |11>)/sqrt(2)`, 1 is `(|00> - |11>)/sqrt(2)`,
    /// 2 is `(|01> + |10>)/sqrt(2)` and 3 is the singlet
    /// `(|01> - |10>)/sqrt(2)`.
    pub fn bell_state(index: usize) -> Result<Self, QstateError> {
        if index > 3 {
            return Err(QstateError::IndexError { index, bound: 4 });
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps: [[f64; 4]; 4] = [
            [h, 0.0, 0.0, h],
            [h, 0.0, 0.0, -h],
            [0.0, h, h, 0.0],
            [0.0, h, -h, 0.0],
        ];
        let amplitudes: Vec<Complex64> = amps[index]
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        Self::from_pure(&amplitudes, SystemShape::qubits(&["A", "B"])?)
    }

    /// GHZ state `(|0...0> + |1...1>)/sqrt(2)` on `parties` qubits labelled
    /// `A`, `B`, `C`, ... in order.
    pub fn ghz_state(parties: usize) -> Result<Self, QstateError> {
        if parties < 2 {
            return Err(QstateError::InvalidArgument(format!(
                "GHZ state needs at least 2 parties, got {parties}"
            )));
        }
        let labels: Vec<String> = (0..parties)
            .map(|k| ((b'A' + (k % 26) as u8) as char).to_string())
            .collect();
        if parties > 26 {
            return Err(QstateError::LimitExceeded {
                dim: usize::MAX,
                limit: DEFAULT_DIM_LIMIT,
            });
        }
        let pairs: Vec<(&str, usize)> = labels.iter().map(|l| (l.as_str(), 2)).collect();
        let shape = SystemShape::new(&pairs)?;
        let total = shape.total_dim();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); total];
        amplitudes[0] = Complex64::new(h, 0.0);
        amplitudes[total - 1] = Complex64::new(h, 0.0);
        Self::from_pure(&amplitudes, shape)
    }

    /// Diagonal (classical) state: probability `probs[k]` on the basis
    /// vector given by the multi-index `indices[k]`, one component per
    /// subsystem.
    pub fn classical_mixture(
        probs: &ProbabilityVector,
        indices: &[Vec<usize>],
        shape: &SystemShape,
    ) -> Result<Self, QstateError> {
        if probs.len() != indices.len() {
            return Err(QstateError::DimMismatch(format!(
                "{} probabilities but {} basis indices",
                probs.len(),
                indices.len()
            )));
        }
        let dims = shape.dims();
        let strides = linmath::tensor_strides(&dims);
        let mut flat = Vec::with_capacity(indices.len());
        for multi in indices {
            if multi.len() != dims.len() {
                return Err(QstateError::DimMismatch(format!(
                    "multi-index {multi:?} has {} components, shape {shape} has {} subsystems",
                    multi.len(),
                    dims.len()
                )));
            }
            let mut offset = 0usize;
            for (p, &component) in multi.iter().enumerate() {
                if component >= dims[p] {
                    return Err(QstateError::IndexError {
                        index: component,
                        bound: dims[p],
                    });
                }
                offset += component * strides[p];
            }
            if flat.contains(&offset) {
                return Err(QstateError::DuplicateIndex(offset));
            }
            flat.push(offset);
        }
        let total = shape.total_dim();
        let mut diag = vec![0.0; total];
        for (k, &offset) in flat.iter().enumerate() {
            diag[offset] = probs.as_slice()[k];
        }
        Self::new(shape.clone(), ComplexMatrix::from_real_diag(&diag))
    }

    /// Tensor product of independent states; labels must not repeat.
    pub fn product_state(factors: &[DensityMatrix]) -> Result<Self, QstateError> {
        let first = factors
            .first()
            .ok_or_else(|| QstateError::InvalidArgument("no factors given".into()))?;
        let mut pairs: Vec<(String, usize)> = Vec::new();
        let mut mat = first.mat.clone();
        for (k, factor) in factors.iter().enumerate() {
            for part in factor.shape.parts() {
                if pairs.iter().any(|(label, _)| label == &part.label) {
                    return Err(QstateError::LabelClash(part.label.clone()));
                }
                pairs.push((part.label.clone(), part.dim));
            }
            if k > 0 {
                mat = kron(&mat, &factor.mat);
            }
        }
        let borrowed: Vec<(&str, usize)> =
            pairs.iter().map(|(l, d)| (l.as_str(), *d)).collect();
        let shape = SystemShape::new(&borrowed)?;
        Self::new(shape, mat)
    }

    /// Maximally mixed state `1/d` on the given shape.
    pub fn maximally_mixed(shape: &SystemShape) -> Result<Self, QstateError> {
        let d = shape.total_dim();
        Self::new(
            shape.clone(),
            ComplexMatrix::identity(d).scaled(1.0 / d as f64),
        )
    }

    /// Seeded random separable state on a two-part shape: a convex mixture
    /// of `terms` products of independent Haar-random pure states. The same
    /// seed always reproduces the same state bit for bit.
    pub fn random_separable(
        seed: u64,
        terms: usize,
        shape: &SystemShape,
    ) -> Result<Self, QstateError> {
        if shape.len() != 2 {
            return Err(QstateError::InvalidArgument(format!(
                "separable sampling needs a two-part shape, got {shape}"
            )));
        }
        if terms == 0 {
            return Err(QstateError::InvalidArgument(
                "need at least one product term".into(),
            ));
        }
        let dims = shape.dims();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<f64> = (0..terms).map(|_| 1.0 - rng.random::<f64>()).collect();
        let total_weight: f64 = raw.iter().sum();
        let total = shape.total_dim();
        let mut mat = ComplexMatrix::zeros(total, total);
        for w in raw {
            let weight = w / total_weight;
            let left = random_pure_projector(&mut rng, dims[0]);
            let right = random_pure_projector(&mut rng, dims[1]);
            mat = mat.add(&kron(&left, &right).scaled(weight));
        }
        Self::new(shape.clone(), mat)
    }

    /// Seeded random full-rank state drawn from the Hilbert-Schmidt
    /// ensemble: `G G^dagger / Tr(G G^dagger)` with `G` a complex Ginibre
    /// matrix. Deterministic per seed.
    pub fn random_mixed(seed: u64, shape: &SystemShape) -> Result<Self, QstateError> {
        let total = shape.total_dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = ComplexMatrix::from_fn(total, total, |_, _| complex_normal(&mut rng));
        let gg = g.mul(&g.adjoint());
        let trace = gg.trace().re;
        Self::new(shape.clone(), gg.scaled(1.0 / trace))
    }

    /// Convex combination of states over a common shape. Weights must form
    /// a probability vector aligned with `states`.
    pub fn convex_combination(
        weights: &ProbabilityVector,
        states: &[DensityMatrix],
    ) -> Result<Self, QstateError> {
        if weights.len() != states.len() {
            return Err(QstateError::DimMismatch(format!(
                "{} weights but {} states",
                weights.len(),
                states.len()
            )));
        }
        let first = states
            .first()
            .ok_or_else(|| QstateError::InvalidArgument("no states given".into()))?;
        for s in states {
            if s.shape != first.shape {
                return Err(QstateError::DimMismatch(format!(
                    "shapes {} and {} differ",
                    s.shape, first.shape
                )));
            }
        }
        let mut mat = ComplexMatrix::zeros(first.dim(), first.dim());
        for (w, s) in weights.as_slice().iter().zip(states) {
            mat = mat.add(&s.mat.scaled(*w));
        }
        Self::new(first.shape.clone(), mat)
    }

    /// Conjugates the state by a unitary: `U rho U^dagger`. The caller is
    /// responsible for `U` being unitary; the result is re-validated.
    pub fn apply_unitary(&self, u: &ComplexMatrix) -> Result<Self, QstateError> {
        if !u.is_square() || u.rows() != self.dim() {
            return Err(QstateError::DimMismatch(format!(
                "unitary is {}x{}, state has dimension {}",
                u.rows(),
                u.cols(),
                self.dim()
            )));
        }
        let mat = u.mul(&self.mat).mul(&u.adjoint());
        Self::new(self.shape.clone(), mat)
    }

    /// Reduced state on the subsystems named in `keep` (any order); the
    /// remaining subsystems are traced out. Kept factors stay in shape
    /// order.
    pub fn reduce(&self, keep: &[&str]) -> Result<Self, QstateError> {
        if keep.is_empty() {
            return Err(QstateError::EmptyKeep);
        }
        let positions = self.shape.subset_positions(keep)?;
        let dims = self.shape.dims();
        let reduced = partial_trace(&self.mat, &dims, &positions)?;
        Self::new(self.shape.restrict(&positions), reduced)
    }
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Projector onto a Haar-random pure state of the given dimension.
fn random_pure_projector(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let mut amps: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| amps[i] * amps[j].conj())
}

/// Haar-random unitary of the given dimension, deterministic per seed:
/// QR decomposition of a complex Ginibre matrix with the phases of the
/// diagonal of `R` folded into `Q`.
pub fn haar_unitary(seed: u64, dim: usize) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = nalgebra::DMatrix::<Complex64>::from_fn(dim, dim, |_, _| complex_normal(&mut rng));
    let qr = g.qr();
    let r = qr.r();
    let q = qr.q();
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q[(i, j)] * phase
    })
}

#[derive(Deserialize)]
struct StateFile {
    version: u32,
    shape: Vec<PartSpec>,
    matrix_re: Vec<Vec<f64>>,
    matrix_im: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct PartSpec {
    label: String,
    dim: usize,
}

/// Formats a float with 17 significant digits, enough to round-trip `f64`
/// exactly.
fn fmt_exact(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a state to the versioned JSON file format. Matrix entries are
/// stored as separate real and imaginary row-major arrays with 17
/// significant digits, so [`load_state`] recovers them bit-exactly.
pub fn save_state(rho: &DensityMatrix, path: impl AsRef<Path>) -> Result<(), QstateError> {
    let path = path.as_ref();
    let n = rho.dim();
    let mat = rho.matrix();
    let mut out = String::new();
    out.push_str("{\n  \"version\": 1,\n  \"shape\": [");
    for (k, part) in rho.shape().parts().iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        // serde_json handles label escaping.
        let label = serde_json::to_string(&part.label).expect("string serialization");
        out.push_str(&format!("{{\"label\": {label}, \"dim\": {}}}", part.dim));
    }
    out.push_str("],\n");
    for (field, pick) in [
        ("matrix_re", true),
        ("matrix_im", false),
    ] {
        out.push_str(&format!("  \"{field}\": [\n"));
        for i in 0..n {
            out.push_str("    [");
            for j in 0..n {
                if j > 0 {
                    out.push_str(", ");
                }
                let z = mat[(i, j)];
                out.push_str(&fmt_exact(if pick { z.re } else { z.im }));
            }
            out.push(']');
            out.push_str(if i + 1 < n { ",\n" } else { "\n" });
        }
        out.push_str(if field == "matrix_re" { "  ],\n" } else { "  ]\n" });
    }
    out.push_str("}\n");
    std::fs::write(path, out).map_err(|source| QstateError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads a state written by [`save_state`], re-validating every physical
/// invariant. Malformed documents give a parse error naming the problem;
/// well-formed documents describing unphysical operators give an invariant
/// error with the measured residual.
pub fn load_state(path: impl AsRef<Path>) -> Result<DensityMatrix, QstateError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| QstateError::Io {
        path: display.clone(),
        source,
    })?;
    let parsed: StateFile =
        serde_json::from_str(&text).map_err(|e| QstateError::ParseError {
            path: display.clone(),
            detail: e.to_string(),
        })?;
    if parsed.version != STATE_FILE_VERSION {
        return Err(QstateError::ParseError {
            path: display.clone(),
            detail: format!(
                "unsupported version {} (expected {STATE_FILE_VERSION})",
                parsed.version
            ),
        });
    }
    let pairs: Vec<(&str, usize)> = parsed
        .shape
        .iter()
        .map(|p| (p.label.as_str(), p.dim))
        .collect();
    let shape = SystemShape::new(&pairs)?;
    let n = shape.total_dim();
    for (field, rows) in [("matrix_re", &parsed.matrix_re), ("matrix_im", &parsed.matrix_im)] {
        if rows.len() != n {
            return Err(QstateError::ParseError {
                path: display.clone(),
                detail: format!("{field} has {} rows, expected {n}", rows.len()),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(QstateError::ParseError {
                    path: display.clone(),
                    detail: format!("{field} row {i} has {} entries, expected {n}", row.len()),
                });
            }
        }
    }
    let mat = ComplexMatrix::from_fn(n, n, |i, j| {
        Complex64::new(parsed.matrix_re[i][j], parsed.matrix_im[i][j])
    });
    DensityMatrix::new(shape, mat)
}
