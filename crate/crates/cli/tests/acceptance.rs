//! Acceptance suite: every contract the artifact must honor, one test per
//! criterion, each printing a PASS/FAIL line (run with `--nocapture` to see
//! them). The numeric fixtures are frozen here independently of the library
//! code paths they exercise.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qinfo::entcalc::{
    bipartite_diagram, check_bounds, conditional_amplitude, conditional_entropy,
    entropy_via_operator, mutual_entropy, ternary_mutual_entropy, trotter_sequence,
    von_neumann_entropy, Partition,
};
use qinfo::linmath::{commutator_norm, embed_at, kron, ComplexMatrix};
use qinfo::qstate::{
    haar_unitary, DensityMatrix, ProbabilityVector, SystemShape,
};

fn criterion(id: usize, name: &str, body: impl FnOnce()) {
    let result = catch_unwind(AssertUnwindSafe(body));
    match &result {
        Ok(()) => println!("criterion {id:>2} ({name}): PASS"),
        Err(_) => println!("criterion {id:>2} ({name}): FAIL"),
    }
    if let Err(e) = result {
        std::panic::resume_unwind(e);
    }
}

fn assert_close(value: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (value - expected).abs() <= tol,
        "{what}: got {value}, expected {expected} within {tol}"
    );
}

fn singlet() -> DensityMatrix {
    DensityMatrix::bell_state(3).unwrap()
}

fn part_ab() -> Partition {
    Partition::new(&["A"], &["B"]).unwrap()
}

fn two_qubits() -> SystemShape {
    SystemShape::qubits(&["A", "B"]).unwrap()
}

#[test]
fn criterion_01_epr_fixture() {
    criterion(1, "EPR singlet entropy fixture", || {
        let rho = singlet();
        let d = bipartite_diagram(&rho, &part_ab()).unwrap();
        assert_close(d.s_a, 1.0, 1e-9, "S(A)");
        assert_close(d.s_b, 1.0, 1e-9, "S(B)");
        assert_close(d.s_ab, 0.0, 1e-9, "S(AB)");
        assert_close(d.s_a_given_b, -1.0, 1e-9, "S(A|B)");
        assert_close(d.s_b_given_a, -1.0, 1e-9, "S(B|A)");
        assert_close(d.s_mutual, 2.0, 1e-9, "S(A:B)");
    });
}

#[test]
fn criterion_02_singlet_conditional_amplitude() {
    criterion(2, "conditional amplitude operator of the singlet", || {
        let amp = conditional_amplitude(&singlet(), &part_ab()).unwrap();
        let rows: [[f64; 4]; 4] = [
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, -1.0, 0.0],
            [0.0, -1.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ];
        for (i, row) in rows.iter().enumerate() {
            for (j, &want) in row.iter().enumerate() {
                let got = amp.matrix()[(i, j)];
                assert!(
                    (got - Complex64::new(want, 0.0)).norm() <= 1e-9,
                    "entry ({i},{j}): got {got}"
                );
            }
        }
        let spectrum = amp.spectrum();
        for &lambda in &spectrum[..3] {
            assert_close(lambda, 0.0, 1e-9, "eigenvalue");
        }
        assert_close(spectrum[3], 2.0, 1e-9, "top eigenvalue");
        assert_eq!(
            amp.unclassical_eigenvalues().len(),
            1,
            "exactly one eigenvalue above 1"
        );
    });
}

#[test]
fn criterion_03_entropy_via_operator() {
    criterion(3, "operator-based conditional entropy of the singlet", || {
        let rho = singlet();
        let amp = conditional_amplitude(&rho, &part_ab()).unwrap();
        let s = entropy_via_operator(&rho, &amp).unwrap();
        assert_close(s, -1.0, 1e-8, "-Tr[rho log2 amp]");
    });
}

#[test]
fn criterion_04_ghz_fixture() {
    criterion(4, "GHZ reductions and ternary mutual entropy", || {
        let ghz = DensityMatrix::ghz_state(3).unwrap();
        assert_close(von_neumann_entropy(&ghz), 0.0, 1e-9, "S(ABC)");
        let ab = ghz.reduce(&["A", "B"]).unwrap();
        let expected = ComplexMatrix::from_real_diag(&[0.5, 0.0, 0.0, 0.5]);
        assert!(
            ab.matrix().max_abs_diff(&expected) <= 1e-12,
            "reduced AB state"
        );
        let s_ab = von_neumann_entropy(&ab);
        assert_close(s_ab, 1.0, 1e-9, "S(AB)");
        let part = Partition::new(&["C"], &["A", "B"]).unwrap();
        let s_c_given_ab = conditional_entropy(&ghz, &part).unwrap();
        assert_close(s_c_given_ab, -1.0, 1e-9, "S(C|AB)");
        assert_close(s_ab + s_c_given_ab, 0.0, 1e-9, "S(AB) + S(C|AB)");
        let center = ternary_mutual_entropy(&ghz, &["A", "B", "C"]).unwrap();
        assert_close(center, 0.0, 1e-9, "S(A:B:C)");
    });
}

#[test]
fn criterion_05_diagram_triptych() {
    criterion(5, "uncorrelated, classical, and entangled diagrams", || {
        let case_i = {
            let a = DensityMatrix::maximally_mixed(&SystemShape::qubits(&["A"]).unwrap()).unwrap();
            let b = DensityMatrix::maximally_mixed(&SystemShape::qubits(&["B"]).unwrap()).unwrap();
            DensityMatrix::product_state(&[a, b]).unwrap()
        };
        let case_ii = {
            let probs = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
            DensityMatrix::classical_mixture(&probs, &[vec![0, 0], vec![1, 1]], &two_qubits())
                .unwrap()
        };
        let case_iii = singlet();
        for (rho, expected, label) in [
            (&case_i, (1.0, 0.0, 1.0), "independent"),
            (&case_ii, (0.0, 1.0, 0.0), "classically correlated"),
            (&case_iii, (-1.0, 2.0, -1.0), "entangled"),
        ] {
            let d = bipartite_diagram(rho, &part_ab()).unwrap();
            assert_close(d.s_a_given_b, expected.0, 1e-9, label);
            assert_close(d.s_mutual, expected.1, 1e-9, label);
            assert_close(d.s_b_given_a, expected.2, 1e-9, label);
        }
    });
}

#[test]
fn criterion_06_classical_reduction() {
    criterion(6, "diagonal states reduce to the Shannon formulas", || {
        let log2 = |x: f64| x.log2();
        for seed in 0..50u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let raw: Vec<f64> = (0..4).map(|_| 1.0 - rng.random::<f64>()).collect();
            let total: f64 = raw.iter().sum();
            let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let probs = ProbabilityVector::new(p.clone()).unwrap();
            let indices = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
            let rho =
                DensityMatrix::classical_mixture(&probs, &indices, &two_qubits()).unwrap();

            // Joint index k = i_A * 2 + i_B.
            let p_a = [p[0] + p[1], p[2] + p[3]];
            let p_b = [p[0] + p[2], p[1] + p[3]];
            let mut h_cond = 0.0;
            let mut h_mut = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    let joint = p[i * 2 + j];
                    if joint > 0.0 {
                        h_cond -= joint * log2(joint / p_b[j]);
                        h_mut += joint * log2(joint / (p_a[i] * p_b[j]));
                    }
                }
            }
            let s_cond = conditional_entropy(&rho, &part_ab()).unwrap();
            let s_mut = mutual_entropy(&rho, &part_ab()).unwrap();
            assert_close(s_cond, h_cond, 1e-9, &format!("H(A|B), seed {seed}"));
            assert_close(s_mut, h_mut, 1e-9, &format!("H(A:B), seed {seed}"));
        }
    });
}

#[test]
fn criterion_07_mutual_entropy_bounds() {
    criterion(7, "classical bound violation and quantum ceiling", || {
        let report = check_bounds(&singlet(), &part_ab()).unwrap();
        assert!(
            report.classical_mutual_bound_violated,
            "singlet must break the classical mutual-information bound"
        );
        assert_close(
            report.s_mutual,
            2.0 * report.s_a.min(report.s_b),
            1e-9,
            "singlet saturates the ceiling",
        );
        for seed in 0..200u64 {
            let rho = DensityMatrix::random_mixed(seed, &two_qubits()).unwrap();
            let report = check_bounds(&rho, &part_ab())
                .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert!(report.araki_lieb_satisfied, "seed {seed}");
        }
    });
}

#[test]
fn criterion_08_separable_states_non_negative() {
    criterion(8, "separable states keep conditional entropies non-negative", || {
        for seed in 0..100u64 {
            let terms = 1 + (seed as usize) % 6;
            let rho = DensityMatrix::random_separable(seed, terms, &two_qubits()).unwrap();
            let d = bipartite_diagram(&rho, &part_ab()).unwrap();
            assert!(
                d.s_a_given_b >= -1e-8,
                "seed {seed}: S(A|B) = {}",
                d.s_a_given_b
            );
            assert!(
                d.s_b_given_a >= -1e-8,
                "seed {seed}: S(B|A) = {}",
                d.s_b_given_a
            );
        }
    });
}

#[test]
fn criterion_09_local_unitary_invariance() {
    criterion(9, "amplitude spectra invariant under local unitaries", || {
        for k in 0..20u64 {
            let rho = DensityMatrix::random_mixed(k, &two_qubits()).unwrap();
            let u = kron(
                &haar_unitary(1000 + 2 * k, 2),
                &haar_unitary(1001 + 2 * k, 2),
            );
            let rotated = rho.apply_unitary(&u).unwrap();
            let s1 = conditional_amplitude(&rho, &part_ab()).unwrap().spectrum();
            let s2 = conditional_amplitude(&rotated, &part_ab())
                .unwrap()
                .spectrum();
            for (a, b) in s1.iter().zip(&s2) {
                assert!(
                    (a - b).abs() <= 1e-7,
                    "pair {k}: eigenvalue {a} moved to {b}"
                );
            }
        }
    });
}

#[test]
fn criterion_10_finite_product_convergence() {
    criterion(10, "finite products converge to the exp-log operator", || {
        // Ten deterministic full-rank states whose joint operator does not
        // commute with the conditioned marginal.
        let mut found = 0u32;
        let mut seed = 0u64;
        let ns = [1usize, 2, 4, 8, 16, 32, 64, 128, 256];
        while found < 10 {
            let rho = DensityMatrix::random_mixed(seed, &two_qubits()).unwrap();
            seed += 1;
            let sigma = embed_at(
                rho.reduce(&["B"]).unwrap().matrix(),
                &[2, 2],
                &[1],
            )
            .unwrap();
            let comm = commutator_norm(rho.matrix(), &sigma).unwrap();
            if comm <= 1e-3 || rho.spectrum()[0] <= 1e-3 {
                continue;
            }
            found += 1;
            let steps = trotter_sequence(&rho, &part_ab(), &ns).unwrap();
            assert!(
                steps.last().unwrap().distance < steps[0].distance,
                "state {found}: no convergence"
            );
            for w in steps.windows(2) {
                if w[0].n >= 4 {
                    assert!(
                        w[1].distance <= w[0].distance * 1.1,
                        "state {found}: distance grew from n={} to n={}",
                        w[0].n,
                        w[1].n
                    );
                }
            }
        }

        // Commuting input: the products equal the limit from the start.
        let probs = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        let classical =
            DensityMatrix::classical_mixture(&probs, &[vec![0, 0], vec![1, 1]], &two_qubits())
                .unwrap();
        let steps = trotter_sequence(&classical, &part_ab(), &[1]).unwrap();
        assert!(
            steps[0].distance <= 1e-12,
            "commuting distance at n=1: {}",
            steps[0].distance
        );
    });
}

#[test]
fn criterion_11_conditional_entropy_concavity() {
    criterion(11, "conditional entropy is concave", || {
        for k in 0..100u64 {
            let rho1 = DensityMatrix::random_mixed(3 * k, &two_qubits()).unwrap();
            let rho2 = DensityMatrix::random_mixed(3 * k + 1, &two_qubits()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3 * k + 2);
            let lambda: f64 = rng.random();
            let weights = ProbabilityVector::new(vec![lambda, 1.0 - lambda]).unwrap();
            let mix =
                DensityMatrix::convex_combination(&weights, &[rho1.clone(), rho2.clone()])
                    .unwrap();
            let s_mix = conditional_entropy(&mix, &part_ab()).unwrap();
            let s_avg = lambda * conditional_entropy(&rho1, &part_ab()).unwrap()
                + (1.0 - lambda) * conditional_entropy(&rho2, &part_ab()).unwrap();
            assert!(
                s_mix >= s_avg - 1e-7,
                "triple {k}: mixture {s_mix} below average {s_avg}"
            );
        }
    });
}

#[test]
fn criterion_12_cli_round_trip() {
    criterion(12, "command-line round trip and exit codes", || {
        let bin = env!("CARGO_BIN_EXE_qitool");
        let dir = tempfile::tempdir().unwrap();
        let path = |name: &str| dir.path().join(name).display().to_string();

        let run = |args: &[&str]| {
            let out = Command::new(bin)
                .args(args)
                .output()
                .expect("binary runs");
            (
                out.status.code().unwrap_or(-1),
                String::from_utf8_lossy(&out.stdout).to_string(),
            )
        };

        // Singlet numbers through make -> load -> entropy.
        let (code, _) = run(&["make", "bell3", "--out", &path("bell3.json")]);
        assert_eq!(code, 0);
        let (code, text) = run(&["entropy", "--in", &path("bell3.json"), "--partition", "A|B"]);
        assert_eq!(code, 0);
        for needle in [
            "S(A)    = 1.000000 bits",
            "S(B)    = 1.000000 bits",
            "S(AB)   = 0.000000 bits",
            "S(A|B)  = -1.000000 bits",
            "S(B|A)  = -1.000000 bits",
            "S(A:B)  = 2.000000 bits",
        ] {
            assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
        }

        // GHZ numbers, including the negative conditional entropy.
        let (code, _) = run(&["make", "ghz3", "--out", &path("ghz3.json")]);
        assert_eq!(code, 0);
        let (code, text) = run(&[
            "entropy",
            "--in",
            &path("ghz3.json"),
            "--partition",
            "C|A,B",
        ]);
        assert_eq!(code, 0);
        for needle in [
            "S(AB)    = 1.000000 bits",
            "S(ABC)   = 0.000000 bits",
            "S(C|AB)  = -1.000000 bits",
        ] {
            assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
        }

        // Exit-code taxonomy on forced errors.
        let (code, _) = run(&["make", "nosuch", "--out", &path("x.json")]);
        assert_eq!(code, 2, "unknown state name is a usage error");
        let (code, _) = run(&["entropy", "--in", &path("absent.json"), "--partition", "A|B"]);
        assert_eq!(code, 3, "missing file is a data error");
        let (code, _) = run(&["entropy", "--in", &path("bell3.json"), "--partition", "A|Q"]);
        assert_eq!(code, 2, "unknown label is a usage error");
        let (code, _) = run(&["entropy", "--in", &path("bell3.json"), "--partition", "AB"]);
        assert_eq!(code, 2, "malformed partition is a usage error");
        let (code, _) = run(&[
            "check",
            "--in",
            &path("bell3.json"),
            "--partition",
            "A|B",
            "--expect",
            "inconclusive",
        ]);
        assert_eq!(code, 1, "failed expectation exits 1");
        let (code, _) = run(&[
            "trotter",
            "--in",
            &path("bell3.json"),
            "--partition",
            "A|B",
            "--n-max",
            "3",
        ]);
        assert_eq!(code, 2, "non-power-of-two order is a usage error");

        let corrupted = path("corrupt.json");
        let (code, _) = run(&["make", "caseII", "--out", &corrupted]);
        assert_eq!(code, 0);
        let text = std::fs::read_to_string(&corrupted).unwrap();
        std::fs::write(
            &corrupted,
            text.replace("5.0000000000000000e-1", "4.5000000000000000e-1"),
        )
        .unwrap();
        let (code, _) = run(&["entropy", "--in", &corrupted, "--partition", "A|B"]);
        assert_eq!(code, 3, "unphysical state is a data error");
    });
}
