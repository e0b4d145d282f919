//! Entropy calculus on density matrices, in bits.
//!
//! Entropies of composite systems follow the identities
//! `S(A|B) = S(AB) - S(B)` and `S(A:B) = S(A) + S(B) - S(AB)`; they are
//! always evaluated through marginal spectra, never through operator
//! logarithms of products, so they are exact up to eigensolver round-off.
//!
//! The conditional amplitude operator generalizes the classical conditional
//! probability `p(a|b)`: it is the limit of `[rho_AB^{1/n} (1 (x)
//! rho_B)^{-1/n}]^n`, a positive Hermitian operator whose spectrum may
//! exceed 1 — the signature of quantum entanglement. When `rho_AB` commutes
//! with `1 (x) rho_B` the limit collapses to `rho_AB * pinv(1 (x) rho_B)`
//! on the support, which we take as a fast path; otherwise the limit equals
//! `exp(ln rho_AB - ln(1 (x) rho_B))`, evaluated after mixing a tiny
//! multiple of the identity into the state so all logarithms exist. The
//! mutual amplitude operator swaps the roles of `rho_A (x) rho_B` and
//! `rho_AB`. The finite-`n` products are exposed separately so the
//! convergence of the limit can be observed directly.
//!
//! A negative conditional entropy is impossible classically; here it
//! witnesses entanglement (the converse fails: some entangled states keep
//! both conditional entropies positive).

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::linmath::{
    commutator_norm, embed_at, hermitian_eig, matrix_function, partial_trace, ComplexMatrix,
    LinmathError, SUPPORT_CUTOFF,
};
use crate::qstate::{DensityMatrix, ProbabilityVector, QstateError, SystemShape};

/// Commutator norm at or below which the closed-form product is used.
pub const COMMUTING_THRESHOLD: f64 = 1e-10;

/// Weight of identity mixed into a state before taking operator logarithms.
pub const REGULARIZATION_EPS: f64 = 1e-10;

/// Amplitude operators must have eigenvalues at or above this floor.
pub const AMPLITUDE_EIGENVALUE_FLOOR: f64 = -1e-7;

/// Largest tolerated state weight outside an operator's support in
/// [`entropy_via_operator`].
pub const SUPPORT_LEAK_TOL: f64 = 1e-8;

/// A conditional entropy strictly below this threshold witnesses
/// entanglement.
pub const WITNESS_THRESHOLD: f64 = -1e-8;

/// Slack for the classical bound `S(A:B) <= min(S(A), S(B))`.
pub const CLASSICAL_BOUND_TOL: f64 = 1e-8;

/// Slack for the Araki-Lieb bound `S(A:B) <= 2 min(S(A), S(B))`; a larger
/// excess indicates a numerical fault, not physics.
pub const ARAKI_LIEB_TOL: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum EntcalcError {
    #[error("invalid partition: {0}")]
    PartitionError(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("amplitude operator not positive: minimum eigenvalue {0:.6e}")]
    PositivityError(f64),
    #[error("state carries weight {0:.6e} outside the operator support")]
    SupportError(f64),
    #[error("Araki-Lieb bound exceeded by {0:.6e}: numerical fault")]
    ArakiLiebViolation(f64),
    #[error(transparent)]
    Qstate(#[from] QstateError),
    #[error(transparent)]
    Linmath(#[from] LinmathError),
}

/// Two disjoint, non-empty sets of subsystem labels. Together they must
/// cover the state they are applied to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    side_a: Vec<String>,
    side_b: Vec<String>,
}

impl Partition {
    pub fn new(side_a: &[&str], side_b: &[&str]) -> Result<Self, EntcalcError> {
        if side_a.is_empty() || side_b.is_empty() {
            return Err(EntcalcError::PartitionError(
                "both sides need at least one label".into(),
            ));
        }
        let mut seen: Vec<&str> = Vec::new();
        for &label in side_a.iter().chain(side_b) {
            if seen.contains(&label) {
                return Err(EntcalcError::PartitionError(format!(
                    "label {label:?} listed more than once"
                )));
            }
            seen.push(label);
        }
        Ok(Self {
            side_a: side_a.iter().map(|s| s.to_string()).collect(),
            side_b: side_b.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn side_a(&self) -> Vec<&str> {
        self.side_a.iter().map(String::as_str).collect()
    }

    pub fn side_b(&self) -> Vec<&str> {
        self.side_b.iter().map(String::as_str).collect()
    }

    /// The same partition with the two sides swapped.
    pub fn flipped(&self) -> Self {
        Self {
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
        }
    }

    /// Checks the partition covers the shape exactly and returns the factor
    /// positions of each side, sorted ascending.
    fn positions_in(&self, shape: &SystemShape) -> Result<(Vec<usize>, Vec<usize>), EntcalcError> {
        let pos_a = shape.subset_positions(&self.side_a())?;
        let pos_b = shape.subset_positions(&self.side_b())?;
        if pos_a.len() + pos_b.len() != shape.len() {
            let missing: Vec<&str> = shape
                .labels()
                .into_iter()
                .filter(|l| !self.side_a.iter().any(|a| a == l))
                .filter(|l| !self.side_b.iter().any(|b| b == l))
                .collect();
            return Err(EntcalcError::PartitionError(format!(
                "labels {missing:?} not covered by the partition"
            )));
        }
        Ok((pos_a, pos_b))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.side_a.join(","), self.side_b.join(","))
    }
}

/// Whether an amplitude operator generalizes conditional or mutual
/// probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmplitudeKind {
    Conditional,
    Mutual,
}

impl fmt::Display for AmplitudeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AmplitudeKind::Conditional => "conditional",
            AmplitudeKind::Mutual => "mutual",
        })
    }
}

/// Evaluation strategy that produced an amplitude operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmplitudeMethod {
    /// Closed-form product on the support, exact for commuting operators.
    CommutingFastPath,
    /// `exp(ln X - ln Y)` on the regularized state.
    ExpLog,
    /// Finite product at the given order (diagnostic, see
    /// [`trotter_sequence`]).
    Trotter(usize),
}

impl fmt::Display for AmplitudeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmplitudeMethod::CommutingFastPath => f.write_str("commuting-fast-path"),
            AmplitudeMethod::ExpLog => f.write_str("exp-log"),
            AmplitudeMethod::Trotter(n) => write!(f, "trotter({n})"),
        }
    }
}

/// Positive Hermitian operator generalizing a conditional (or joint/marginal
/// ratio) probability distribution. Unlike a density matrix its eigenvalues
/// may exceed 1; any eigenvalue above 1 has no classical analogue.
#[derive(Clone, Debug)]
pub struct ConditionalAmplitude {
    mat: ComplexMatrix,
    kind: AmplitudeKind,
    method: AmplitudeMethod,
}

impl ConditionalAmplitude {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn kind(&self) -> AmplitudeKind {
        self.kind
    }

    pub fn method(&self) -> AmplitudeMethod {
        self.method
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eig(&self.mat)
            .expect("amplitude operators are Hermitian by construction")
            .eigenvalues
    }

    /// Eigenvalues strictly above 1, which no classical conditional
    /// probability can reach.
    pub fn unclassical_eigenvalues(&self) -> Vec<f64> {
        self.spectrum()
            .into_iter()
            .filter(|&x| x > 1.0 + 1e-9)
            .collect()
    }

    fn build(
        raw: ComplexMatrix,
        kind: AmplitudeKind,
        method: AmplitudeMethod,
    ) -> Result<Self, EntcalcError> {
        let mat = raw.hermitian_part();
        let eig = hermitian_eig(&mat)?;
        let min_eig = eig.eigenvalues[0];
        if min_eig < AMPLITUDE_EIGENVALUE_FLOOR {
            return Err(EntcalcError::PositivityError(min_eig));
        }
        Ok(Self { mat, kind, method })
    }
}

/// Bipartite entropy Venn diagram. The three regions
/// `S(A|B), S(A:B), S(B|A)` always sum to `S(AB)`; for entangled states the
/// outer regions can be negative and the mutual region can exceed the
/// smaller marginal entropy.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyDiagram {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub s_a_given_b: f64,
    pub s_b_given_a: f64,
    pub s_mutual: f64,
}

/// Ternary entropy Venn diagram: the seven regions of the three-set diagram
/// plus every joint entropy they derive from. Regions carrying one system
/// sum to that system's entropy; all seven sum to `S(ABC)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TernaryDiagram {
    pub labels: [String; 3],
    pub s_a: f64,
    pub s_b: f64,
    pub s_c: f64,
    pub s_ab: f64,
    pub s_ac: f64,
    pub s_bc: f64,
    pub s_abc: f64,
    /// `S(A|BC)`
    pub c_a: f64,
    /// `S(B|AC)`
    pub c_b: f64,
    /// `S(C|AB)`
    pub c_c: f64,
    /// `S(A:B|C)`
    pub m_ab: f64,
    /// `S(A:C|B)`
    pub m_ac: f64,
    /// `S(B:C|A)`
    pub m_bc: f64,
    /// `S(A:B:C)`, the central region.
    pub center: f64,
}

/// Result of [`check_bounds`]: which classical entropy bounds hold for a
/// bipartite state, with the underlying values echoed in bits.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub s_a_given_b: f64,
    pub s_b_given_a: f64,
    pub s_mutual: f64,
    /// `S(A:B) > min(S(A), S(B))`: impossible classically.
    pub classical_mutual_bound_violated: bool,
    /// Slack in `S(A:B) <= 2 min(S(A), S(B))`; never negative beyond
    /// round-off for a valid computation.
    pub araki_lieb_excess: f64,
    pub araki_lieb_satisfied: bool,
    pub negative_conditional_ab: bool,
    pub negative_conditional_ba: bool,
    pub entanglement_witnessed: bool,
}

/// Verdict of [`entanglement_witness`]. A negative conditional entropy
/// proves entanglement; its absence proves nothing.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessResult {
    pub witnessed: bool,
    pub s_a_given_b: f64,
    pub s_b_given_a: f64,
}

/// One element of the operator sequence converging to the conditional
/// amplitude: order `n`, the finite product itself, and its Frobenius
/// distance to the `exp`/`log` limit.
#[derive(Clone, Debug)]
pub struct TrotterStep {
    pub n: usize,
    pub matrix: ComplexMatrix,
    pub distance: f64,
}

/// Shannon entropy of a probability vector, in bits. Zero-probability
/// outcomes contribute nothing (`0 log 0 = 0`).
pub fn shannon_entropy(probs: &ProbabilityVector) -> f64 {
    entropy_of_spectrum(probs.as_slice())
}

/// Von Neumann entropy `S(rho) = -Tr rho log2 rho`, in bits, computed from
/// the spectrum with the `0 log 0 = 0` convention.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.spectrum())
}

fn entropy_of_spectrum(spectrum: &[f64]) -> f64 {
    let s: f64 = spectrum
        .iter()
        .filter(|&&p| p > SUPPORT_CUTOFF)
        .map(|&p| -p * p.log2())
        .sum();
    // Eigenvalues a hair above 1 can push the sum to a tiny negative value.
    if s < 0.0 && s > -1e-6 {
        0.0
    } else {
        s
    }
}

/// Conditional entropy `S(A|B) = S(AB) - S(B)` in bits. Negative values are
/// legitimate and witness entanglement.
pub fn conditional_entropy(rho: &DensityMatrix, part: &Partition) -> Result<f64, EntcalcError> {
    part.positions_in(rho.shape())?;
    let rho_b = rho.reduce(&part.side_b())?;
    Ok(von_neumann_entropy(rho) - von_neumann_entropy(&rho_b))
}

/// Mutual entropy `S(A:B) = S(A) + S(B) - S(AB)` in bits. Never negative;
/// entangled states can push it above the classical ceiling
/// `min(S(A), S(B))` up to `2 min(S(A), S(B))`.
pub fn mutual_entropy(rho: &DensityMatrix, part: &Partition) -> Result<f64, EntcalcError> {
    let d = bipartite_diagram(rho, part)?;
    Ok(d.s_mutual)
}

/// The conditional amplitude operator `rho_{A|B}`, the quantum analogue of
/// `p(a|b)`.
///
/// When `rho_AB` commutes with `1 (x) rho_B` (commutator norm at most
/// [`COMMUTING_THRESHOLD`]) the operator is the exact support-restricted
/// product `rho_AB * pinv(1 (x) rho_B)`. Otherwise it is
/// `exp(ln rho' - ln(1 (x) rho'_B))` with `rho'` the state mixed with
/// [`REGULARIZATION_EPS`] of the maximally mixed state so both logarithms
/// exist.
pub fn conditional_amplitude(
    rho: &DensityMatrix,
    part: &Partition,
) -> Result<ConditionalAmplitude, EntcalcError> {
    let (_, pos_b) = part.positions_in(rho.shape())?;
    let dims = rho.shape().dims();
    let rho_b = rho.reduce(&part.side_b())?;
    let sigma = embed_at(rho_b.matrix(), &dims, &pos_b)?;
    let comm = commutator_norm(rho.matrix(), &sigma)?;
    if comm <= COMMUTING_THRESHOLD {
        let pinv = matrix_function(&sigma, |x| 1.0 / x, true)?;
        let raw = rho.matrix().mul(&pinv);
        return ConditionalAmplitude::build(
            raw,
            AmplitudeKind::Conditional,
            AmplitudeMethod::CommutingFastPath,
        );
    }
    let rho_reg = regularize(rho.matrix())?;
    let sigma_reg = embed_at(&partial_trace(&rho_reg, &dims, &pos_b)?, &dims, &pos_b)?;
    let raw = exp_log_ratio(&rho_reg, &sigma_reg)?;
    ConditionalAmplitude::build(raw, AmplitudeKind::Conditional, AmplitudeMethod::ExpLog)
}

/// The mutual amplitude operator `rho_{A:B}`, the quantum analogue of
/// `p(a) p(b) / p(ab)`; method selection as in [`conditional_amplitude`]
/// with the roles of `rho_A (x) rho_B` and `rho_AB` swapped.
pub fn mutual_amplitude(
    rho: &DensityMatrix,
    part: &Partition,
) -> Result<ConditionalAmplitude, EntcalcError> {
    let (pos_a, pos_b) = part.positions_in(rho.shape())?;
    let dims = rho.shape().dims();
    let rho_a = rho.reduce(&part.side_a())?;
    let rho_b = rho.reduce(&part.side_b())?;
    let product = embed_at(rho_a.matrix(), &dims, &pos_a)?
        .mul(&embed_at(rho_b.matrix(), &dims, &pos_b)?);
    let comm = commutator_norm(rho.matrix(), &product)?;
    if comm <= COMMUTING_THRESHOLD {
        let pinv = matrix_function(rho.matrix(), |x| 1.0 / x, true)?;
        let raw = product.mul(&pinv);
        return ConditionalAmplitude::build(
            raw,
            AmplitudeKind::Mutual,
            AmplitudeMethod::CommutingFastPath,
        );
    }
    let rho_reg = regularize(rho.matrix())?;
    let a_reg = embed_at(&partial_trace(&rho_reg, &dims, &pos_a)?, &dims, &pos_a)?;
    let b_reg = embed_at(&partial_trace(&rho_reg, &dims, &pos_b)?, &dims, &pos_b)?;
    let raw = exp_log_ratio(&a_reg.mul(&b_reg), &rho_reg)?;
    ConditionalAmplitude::build(raw, AmplitudeKind::Mutual, AmplitudeMethod::ExpLog)
}

/// Clips round-off negatives out of the spectrum and mixes in
/// `REGULARIZATION_EPS` of the maximally mixed state, making the operator
/// strictly positive definite.
fn regularize(m: &ComplexMatrix) -> Result<ComplexMatrix, EntcalcError> {
    let d = m.dim();
    let clipped = matrix_function(m, |x| x.max(0.0), false)?;
    Ok(clipped
        .scaled(1.0 - REGULARIZATION_EPS)
        .add(&ComplexMatrix::identity(d).scaled(REGULARIZATION_EPS / d as f64)))
}

/// `exp(ln numerator - ln denominator)` for strictly positive Hermitian
/// operators.
fn exp_log_ratio(
    numerator: &ComplexMatrix,
    denominator: &ComplexMatrix,
) -> Result<ComplexMatrix, EntcalcError> {
    let log_num = matrix_function(numerator, f64::ln, false)?;
    let log_den = matrix_function(denominator, f64::ln, false)?;
    Ok(matrix_function(&log_num.sub(&log_den).hermitian_part(), f64::exp, false)?)
}

/// Entropy read directly off an amplitude operator:
/// `-Tr[rho log2 amp]` restricted to the operator's support.
///
/// For a conditional amplitude this reproduces `S(A|B)`, for a mutual
/// amplitude `S(A:B)`, up to regularization error; it exists as an
/// independent consistency check on the operator construction. If the state
/// puts more than [`SUPPORT_LEAK_TOL`] of its weight outside the support,
/// the logarithm is undefined there and the call fails.
pub fn entropy_via_operator(
    rho: &DensityMatrix,
    amp: &ConditionalAmplitude,
) -> Result<f64, EntcalcError> {
    let m = amp.matrix();
    if m.dim() != rho.dim() {
        return Err(EntcalcError::DimMismatch(format!(
            "amplitude operator has dimension {}, state has {}",
            m.dim(),
            rho.dim()
        )));
    }
    let eig = hermitian_eig(m)?;
    let n = m.dim();
    let mut entropy = 0.0;
    let mut leak = 0.0;
    for k in 0..n {
        let lambda = eig.eigenvalues[k];
        let weight = eigvec_weight(rho.matrix(), &eig.eigenvectors, k);
        if lambda > SUPPORT_CUTOFF {
            entropy -= weight * lambda.log2();
        } else {
            leak += weight;
        }
    }
    if leak > SUPPORT_LEAK_TOL {
        return Err(EntcalcError::SupportError(leak));
    }
    Ok(entropy)
}

/// `<v_k| rho |v_k>` for the `k`-th eigenvector column.
fn eigvec_weight(rho: &ComplexMatrix, vectors: &ComplexMatrix, k: usize) -> f64 {
    let n = rho.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += vectors[(i, k)].conj() * rho[(i, j)] * vectors[(j, k)];
        }
    }
    acc.re.max(0.0)
}

/// Finite products `T_n = [rho'^{1/n} sigma'^{-1/n}]^n` on the regularized
/// state, together with each product's Frobenius distance to the
/// `exp(ln rho' - ln sigma')` limit. The distances shrink as `n` grows —
/// this makes the convergence of the conditional amplitude construction
/// observable. For commuting states every distance is already at round-off
/// level.
pub fn trotter_sequence(
    rho: &DensityMatrix,
    part: &Partition,
    n_list: &[usize],
) -> Result<Vec<TrotterStep>, EntcalcError> {
    let (_, pos_b) = part.positions_in(rho.shape())?;
    if let Some(&bad) = n_list.iter().find(|&&n| n == 0) {
        return Err(EntcalcError::InvalidArgument(format!(
            "product order must be at least 1, got {bad}"
        )));
    }
    let dims = rho.shape().dims();
    let rho_reg = regularize(rho.matrix())?;
    let sigma_reg = embed_at(&partial_trace(&rho_reg, &dims, &pos_b)?, &dims, &pos_b)?;
    let limit = exp_log_ratio(&rho_reg, &sigma_reg)?;
    let mut steps = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let root = 1.0 / n as f64;
        let a = matrix_function(&rho_reg, |x| x.powf(root), false)?;
        let b = matrix_function(&sigma_reg, |x| x.powf(-root), false)?;
        let t = a.mul(&b).pow(n as u64)?;
        let distance = t.sub(&limit).frobenius_norm();
        steps.push(TrotterStep {
            n,
            matrix: t,
            distance,
        });
    }
    Ok(steps)
}

/// Entropy Venn diagram of a bipartite split.
pub fn bipartite_diagram(
    rho: &DensityMatrix,
    part: &Partition,
) -> Result<EntropyDiagram, EntcalcError> {
    part.positions_in(rho.shape())?;
    let s_ab = von_neumann_entropy(rho);
    let s_a = von_neumann_entropy(&rho.reduce(&part.side_a())?);
    let s_b = von_neumann_entropy(&rho.reduce(&part.side_b())?);
    Ok(EntropyDiagram {
        s_a,
        s_b,
        s_ab,
        s_a_given_b: s_ab - s_b,
        s_b_given_a: s_ab - s_a,
        s_mutual: s_a + s_b - s_ab,
    })
}

fn ternary_entropies(
    rho: &DensityMatrix,
    labels: &[&str],
) -> Result<[f64; 7], EntcalcError> {
    if labels.len() != 3 {
        return Err(EntcalcError::PartitionError(format!(
            "ternary analysis needs exactly 3 labels, got {}",
            labels.len()
        )));
    }
    let positions = rho.shape().subset_positions(labels)?;
    if positions.len() != rho.shape().len() {
        return Err(EntcalcError::PartitionError(
            "ternary labels must cover the whole state".into(),
        ));
    }
    let (a, b, c) = (labels[0], labels[1], labels[2]);
    let s = |keep: &[&str]| -> Result<f64, EntcalcError> {
        Ok(von_neumann_entropy(&rho.reduce(keep)?))
    };
    Ok([
        s(&[a])?,
        s(&[b])?,
        s(&[c])?,
        s(&[a, b])?,
        s(&[a, c])?,
        s(&[b, c])?,
        von_neumann_entropy(rho),
    ])
}

/// Ternary mutual entropy
/// `S(A:B:C) = S(A)+S(B)+S(C)-S(AB)-S(AC)-S(BC)+S(ABC)`, the center of the
/// three-set Venn diagram. Zero for GHZ (despite maximal three-party
/// correlation), positive for classically correlated triples.
pub fn ternary_mutual_entropy(
    rho: &DensityMatrix,
    labels: &[&str],
) -> Result<f64, EntcalcError> {
    let [s_a, s_b, s_c, s_ab, s_ac, s_bc, s_abc] = ternary_entropies(rho, labels)?;
    Ok(s_a + s_b + s_c - s_ab - s_ac - s_bc + s_abc)
}

/// Full ternary entropy Venn diagram over three labelled subsystems.
pub fn ternary_diagram(
    rho: &DensityMatrix,
    labels: &[&str],
) -> Result<TernaryDiagram, EntcalcError> {
    let [s_a, s_b, s_c, s_ab, s_ac, s_bc, s_abc] = ternary_entropies(rho, labels)?;
    Ok(TernaryDiagram {
        labels: [
            labels[0].to_string(),
            labels[1].to_string(),
            labels[2].to_string(),
        ],
        s_a,
        s_b,
        s_c,
        s_ab,
        s_ac,
        s_bc,
        s_abc,
        c_a: s_abc - s_bc,
        c_b: s_abc - s_ac,
        c_c: s_abc - s_ab,
        m_ab: s_ac + s_bc - s_c - s_abc,
        m_ac: s_ab + s_bc - s_b - s_abc,
        m_bc: s_ab + s_ac - s_a - s_abc,
        center: s_a + s_b + s_c - s_ab - s_ac - s_bc + s_abc,
    })
}

/// Checks the classical and quantum bounds on the mutual entropy of a
/// bipartite split. An Araki-Lieb excess beyond [`ARAKI_LIEB_TOL`] cannot
/// come from physics and is reported as an error.
pub fn check_bounds(rho: &DensityMatrix, part: &Partition) -> Result<BoundsReport, EntcalcError> {
    let d = bipartite_diagram(rho, part)?;
    let min_marginal = d.s_a.min(d.s_b);
    let excess = d.s_mutual - 2.0 * min_marginal;
    if excess > ARAKI_LIEB_TOL {
        return Err(EntcalcError::ArakiLiebViolation(excess));
    }
    let negative_ab = d.s_a_given_b < WITNESS_THRESHOLD;
    let negative_ba = d.s_b_given_a < WITNESS_THRESHOLD;
    Ok(BoundsReport {
        s_a: d.s_a,
        s_b: d.s_b,
        s_ab: d.s_ab,
        s_a_given_b: d.s_a_given_b,
        s_b_given_a: d.s_b_given_a,
        s_mutual: d.s_mutual,
        classical_mutual_bound_violated: d.s_mutual > min_marginal + CLASSICAL_BOUND_TOL,
        araki_lieb_excess: excess,
        araki_lieb_satisfied: excess <= ARAKI_LIEB_TOL,
        negative_conditional_ab: negative_ab,
        negative_conditional_ba: negative_ba,
        entanglement_witnessed: negative_ab || negative_ba,
    })
}

/// Entanglement witness by negative conditional entropy: a conditional
/// entropy below [`WITNESS_THRESHOLD`] in either direction proves the state
/// is entangled across the partition. A non-negative result is
/// inconclusive.
pub fn entanglement_witness(
    rho: &DensityMatrix,
    part: &Partition,
) -> Result<WitnessResult, EntcalcError> {
    let d = bipartite_diagram(rho, part)?;
    Ok(WitnessResult {
        witnessed: d.s_a_given_b < WITNESS_THRESHOLD || d.s_b_given_a < WITNESS_THRESHOLD,
        s_a_given_b: d.s_a_given_b,
        s_b_given_a: d.s_b_given_a,
    })
}
