//! Density-matrix information theory on dense complex operators.
//!
//! The crate is organized in three layers:
//!
//! * [`linmath`] — dense complex matrices, Hermitian eigendecomposition,
//!   spectral matrix functions, Kronecker products and partial traces.
//! * [`qstate`] — labelled multipartite density matrices with validated
//!   physical invariants, canonical fixtures (Bell, GHZ, classical
//!   mixtures), seeded random ensembles and a JSON state-file format.
//! * [`entcalc`] — the entropy calculus proper: von Neumann entropies,
//!   conditional and mutual amplitude operators, entropy Venn diagrams for
//!   two and three parties, and entanglement witnesses based on negative
//!   conditional entropy.
//!
//! All entropies are measured in bits (base-2 logarithms).

pub mod entcalc;
pub mod linmath;
pub mod qstate;
