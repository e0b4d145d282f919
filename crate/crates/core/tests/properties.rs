//! Property tests for the algebraic invariants the library is built on.
//!
//! Random operators and states are produced from proptest-supplied seeds
//! through the crate's own deterministic samplers, so every failure
//! reproduces from its seed alone.

use num_complex::Complex64;
use proptest::prelude::*;

use qinfo::entcalc::{
    bipartite_diagram, check_bounds, conditional_amplitude, conditional_entropy,
    entropy_via_operator, mutual_entropy, shannon_entropy, ternary_diagram, von_neumann_entropy,
    Partition,
};
use qinfo::linmath::{
    hermitian_eig, kron, matrix_function, partial_trace, ComplexMatrix,
};
use qinfo::qstate::{
    haar_unitary, load_state, save_state, DensityMatrix, ProbabilityVector, SystemShape,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random Hermitian matrix with entries of order one.
fn random_hermitian(seed: u64, dim: usize) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = ComplexMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    raw.hermitian_part()
}

fn random_probs(seed: u64, n: usize) -> ProbabilityVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..n).map(|_| 1.0 - rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    ProbabilityVector::new(raw.iter().map(|x| x / total).collect()).unwrap()
}

fn two_qubits() -> SystemShape {
    SystemShape::qubits(&["A", "B"]).unwrap()
}

fn part_ab() -> Partition {
    Partition::new(&["A"], &["B"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs_the_input(seed in any::<u64>(), dim in 2usize..=8) {
        let m = random_hermitian(seed, dim);
        let eig = hermitian_eig(&m).unwrap();
        let rebuilt = eig.reconstruct();
        prop_assert!(rebuilt.sub(&m).frobenius_norm() <= 1e-9 * dim as f64);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let gram = eig.eigenvectors.adjoint().mul(&eig.eigenvectors);
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(dim)) <= 1e-10);
    }

    #[test]
    fn log_undoes_exp_on_hermitian_matrices(seed in any::<u64>(), dim in 2usize..=6) {
        let m = random_hermitian(seed, dim);
        let exp = matrix_function(&m, f64::exp, false).unwrap();
        let back = matrix_function(&exp, f64::ln, false).unwrap();
        prop_assert!(back.sub(&m).frobenius_norm() <= 1e-8);
    }

    #[test]
    fn partial_trace_inverts_kron(seed in any::<u64>(), da in 2usize..=4, db in 2usize..=4) {
        let a = random_hermitian(seed, da);
        let b = random_hermitian(seed.wrapping_add(1), db);
        let joint = kron(&a, &b);
        let back = partial_trace(&joint, &[da, db], &[0]).unwrap();
        prop_assert!(back.sub(&a.scaled(b.trace().re)).frobenius_norm() <= 1e-10);
        let back_b = partial_trace(&joint, &[da, db], &[1]).unwrap();
        prop_assert!(back_b.sub(&b.scaled(a.trace().re)).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn partial_trace_preserves_the_trace(seed in any::<u64>()) {
        let m = random_hermitian(seed, 8);
        for keep in [vec![0usize], vec![1], vec![2], vec![0, 2], vec![1, 2]] {
            let reduced = partial_trace(&m, &[2, 2, 2], &keep).unwrap();
            prop_assert!((reduced.trace() - m.trace()).norm() <= 1e-10);
        }
    }

    #[test]
    fn pure_states_are_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut amps: Vec<Complex64> = (0..4)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        let rho = DensityMatrix::from_pure(&amps, two_qubits()).unwrap();
        let squared = rho.matrix().mul(rho.matrix());
        prop_assert!(squared.max_abs_diff(rho.matrix()) <= 1e-10);
        prop_assert!(von_neumann_entropy(&rho).abs() <= 1e-9);
    }

    #[test]
    fn reduction_composes(seed in any::<u64>()) {
        let shape = SystemShape::qubits(&["A", "B", "C"]).unwrap();
        let rho = DensityMatrix::random_mixed(seed, &shape).unwrap();
        let two_step = rho.reduce(&["A", "B"]).unwrap().reduce(&["A"]).unwrap();
        let one_step = rho.reduce(&["A"]).unwrap();
        prop_assert!(two_step.matrix().max_abs_diff(one_step.matrix()) <= 1e-12);
    }

    #[test]
    fn state_files_round_trip_bit_exactly(seed in any::<u64>()) {
        let shape = two_qubits();
        let rho = DensityMatrix::random_mixed(seed, &shape).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        save_state(&rho, &path).unwrap();
        let back = load_state(&path).unwrap();
        prop_assert_eq!(back.matrix(), rho.matrix());
        prop_assert_eq!(back.shape(), rho.shape());
    }

    #[test]
    fn entropy_regions_are_conserved(seed in any::<u64>()) {
        let rho = DensityMatrix::random_mixed(seed, &two_qubits()).unwrap();
        let d = bipartite_diagram(&rho, &part_ab()).unwrap();
        // S(A|B) + S(A:B) = S(A) and the three regions tile S(AB).
        prop_assert!((d.s_a_given_b + d.s_mutual - d.s_a).abs() <= 1e-9);
        prop_assert!((d.s_a_given_b + d.s_mutual + d.s_b_given_a - d.s_ab).abs() <= 1e-9);
        prop_assert!(d.s_mutual >= -1e-9);
    }

    #[test]
    fn entropy_is_invariant_under_local_unitaries(seed in any::<u64>()) {
        let rho = DensityMatrix::random_mixed(seed, &two_qubits()).unwrap();
        let u = kron(
            &haar_unitary(seed.wrapping_add(7), 2),
            &haar_unitary(seed.wrapping_add(8), 2),
        );
        let rotated = rho.apply_unitary(&u).unwrap();
        let before = bipartite_diagram(&rho, &part_ab()).unwrap();
        let after = bipartite_diagram(&rotated, &part_ab()).unwrap();
        prop_assert!((before.s_a - after.s_a).abs() <= 1e-8);
        prop_assert!((before.s_ab - after.s_ab).abs() <= 1e-8);
        prop_assert!((before.s_a_given_b - after.s_a_given_b).abs() <= 1e-8);
    }

    #[test]
    fn amplitude_operators_are_positive_and_consistent(seed in any::<u64>()) {
        let rho = DensityMatrix::random_mixed(seed, &two_qubits()).unwrap();
        let amp = conditional_amplitude(&rho, &part_ab()).unwrap();
        prop_assert!(amp.matrix().hermiticity_residual() <= 1e-8 * 4.0);
        let spectrum = amp.spectrum();
        prop_assert!(spectrum[0] >= -1e-7);
        let via_op = entropy_via_operator(&rho, &amp).unwrap();
        let via_id = conditional_entropy(&rho, &part_ab()).unwrap();
        prop_assert!((via_op - via_id).abs() <= 1e-6);
    }

    #[test]
    fn separable_states_keep_conditional_entropies_non_negative(
        seed in any::<u64>(),
        terms in 1usize..=6,
    ) {
        let rho = DensityMatrix::random_separable(seed, terms, &two_qubits()).unwrap();
        let d = bipartite_diagram(&rho, &part_ab()).unwrap();
        prop_assert!(d.s_a_given_b >= -1e-8);
        prop_assert!(d.s_b_given_a >= -1e-8);
        // Separable states also respect the classical mutual-entropy ceiling.
        let report = check_bounds(&rho, &part_ab()).unwrap();
        prop_assert!(!report.classical_mutual_bound_violated);
        prop_assert!(!report.entanglement_witnessed);
    }

    #[test]
    fn araki_lieb_holds_for_random_states(seed in any::<u64>()) {
        let report = check_bounds(
            &DensityMatrix::random_mixed(seed, &two_qubits()).unwrap(),
            &part_ab(),
        )
        .unwrap();
        prop_assert!(report.araki_lieb_satisfied);
        prop_assert!(report.s_mutual <= 2.0 * report.s_a.min(report.s_b) + 1e-7);
    }

    #[test]
    fn conditional_entropy_is_concave(seed in any::<u64>(), lambda in 0.01f64..0.99) {
        let rho1 = DensityMatrix::random_mixed(seed, &two_qubits()).unwrap();
        let rho2 = DensityMatrix::random_mixed(seed.wrapping_add(1), &two_qubits()).unwrap();
        let weights = ProbabilityVector::new(vec![lambda, 1.0 - lambda]).unwrap();
        let mix = DensityMatrix::convex_combination(&weights, &[rho1.clone(), rho2.clone()]).unwrap();
        let s_mix = conditional_entropy(&mix, &part_ab()).unwrap();
        let s_avg = lambda * conditional_entropy(&rho1, &part_ab()).unwrap()
            + (1.0 - lambda) * conditional_entropy(&rho2, &part_ab()).unwrap();
        prop_assert!(s_mix >= s_avg - 1e-7);
    }

    #[test]
    fn diagonal_states_reduce_to_shannon(seed in any::<u64>()) {
        // A diagonal two-qubit state is a classical joint distribution; the
        // quantum quantities must equal their Shannon counterparts.
        let probs = random_probs(seed, 4);
        let p = probs.as_slice().to_vec();
        let shape = two_qubits();
        let indices = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        let rho = DensityMatrix::classical_mixture(&probs, &indices, &shape).unwrap();

        let p_b = [p[0] + p[2], p[1] + p[3]];
        let p_a = [p[0] + p[1], p[2] + p[3]];
        let h_joint = shannon_entropy(&probs);
        let h_b = shannon_entropy(&ProbabilityVector::new(p_b.to_vec()).unwrap());
        let h_a = shannon_entropy(&ProbabilityVector::new(p_a.to_vec()).unwrap());

        let s_cond = conditional_entropy(&rho, &part_ab()).unwrap();
        prop_assert!((s_cond - (h_joint - h_b)).abs() <= 1e-9);
        let s_mut = mutual_entropy(&rho, &part_ab()).unwrap();
        prop_assert!((s_mut - (h_a + h_b - h_joint)).abs() <= 1e-9);
    }

    #[test]
    fn ternary_regions_tile_for_random_states(seed in any::<u64>()) {
        let shape = SystemShape::qubits(&["A", "B", "C"]).unwrap();
        let rho = DensityMatrix::random_mixed(seed, &shape).unwrap();
        let d = ternary_diagram(&rho, &["A", "B", "C"]).unwrap();
        let total = d.c_a + d.c_b + d.c_c + d.m_ab + d.m_ac + d.m_bc + d.center;
        prop_assert!((total - d.s_abc).abs() <= 1e-9);
        prop_assert!((d.c_b + d.m_ab + d.m_bc + d.center - d.s_b).abs() <= 1e-9);
        prop_assert!((d.c_c + d.m_ac + d.m_bc + d.center - d.s_c).abs() <= 1e-9);
    }
}
