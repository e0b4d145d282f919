//! Command implementations and the error-to-exit-code mapping.

use std::path::{Path, PathBuf};

use qinfo::entcalc::{
    bipartite_diagram, check_bounds, conditional_amplitude, mutual_amplitude, ternary_diagram,
    trotter_sequence, AmplitudeKind, ConditionalAmplitude, EntcalcError, Partition,
};
use qinfo::linmath::ComplexMatrix;
use qinfo::qstate::{
    load_state, save_state, DensityMatrix, ProbabilityVector, QstateError, SystemShape,
};

use crate::render::{
    aligned_rows, fmt_bits, fmt_sci, json_array_f64, json_array_str, matrix_json_component,
    matrix_text, JsonObject,
};
use crate::{AmpKind, Cli, Command, Expectation, Format, Show};

/// What a command hands back to `main`: the stdout payload, the process
/// exit code, and an optional stderr note.
pub struct CommandOutcome {
    pub payload: String,
    pub exit_code: u8,
    pub note: Option<String>,
}

impl CommandOutcome {
    fn ok(payload: String) -> Self {
        Self {
            payload,
            exit_code: 0,
            note: None,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<QstateError> for CliError {
    fn from(e: QstateError) -> Self {
        match e {
            QstateError::ParseError { .. }
            | QstateError::Io { .. }
            | QstateError::InvariantError { .. }
            | QstateError::NormError { .. }
            | QstateError::Linmath(_) => CliError::data(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<EntcalcError> for CliError {
    fn from(e: EntcalcError) -> Self {
        match e {
            EntcalcError::Qstate(inner) => inner.into(),
            EntcalcError::PartitionError(_)
            | EntcalcError::DimMismatch(_)
            | EntcalcError::InvalidArgument(_) => CliError::usage(e.to_string()),
            EntcalcError::PositivityError(_)
            | EntcalcError::SupportError(_)
            | EntcalcError::ArakiLiebViolation(_)
            | EntcalcError::Linmath(_) => CliError::data(e.to_string()),
        }
    }
}

pub fn run(cli: Cli) -> Result<CommandOutcome, CliError> {
    match &cli.command {
        Command::Make { name } => cmd_make(name, &cli),
        Command::Entropy => cmd_entropy(&cli),
        Command::Diagram => cmd_diagram(&cli),
        Command::Condmat { kind, show } => cmd_condmat(*kind, *show, &cli),
        Command::Reduce { keep } => cmd_reduce(keep, &cli),
        Command::Check { expect } => cmd_check(*expect, &cli),
        Command::Trotter { n_max } => cmd_trotter(*n_max, &cli),
    }
}

fn require_in(cli: &Cli) -> Result<DensityMatrix, CliError> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| CliError::usage("missing --in PATH"))?;
    Ok(load_state(path)?)
}

fn require_out(cli: &Cli) -> Result<&PathBuf, CliError> {
    cli.out
        .as_ref()
        .ok_or_else(|| CliError::usage("missing --out PATH"))
}

fn require_partition(cli: &Cli, shape_hint: &SystemShape) -> Result<Partition, CliError> {
    let spec = cli.partition.as_ref().ok_or_else(|| {
        CliError::usage(format!(
            "missing --partition SPEC (e.g. \"A|B\"); state has subsystems {}",
            shape_hint
                .labels()
                .join(", ")
        ))
    })?;
    parse_partition(spec)
}

/// Parses "A|B" / "A,B|C" into a partition.
pub fn parse_partition(spec: &str) -> Result<Partition, CliError> {
    let (left, right) = spec
        .split_once('|')
        .ok_or_else(|| CliError::usage("partition must have two sides separated by '|'"))?;
    if right.contains('|') {
        return Err(CliError::usage("partition must have exactly two sides"));
    }
    let side = |s: &str| -> Vec<String> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect()
    };
    let (a, b) = (side(left), side(right));
    if a.is_empty() || b.is_empty() {
        return Err(CliError::usage(
            "both partition sides need at least one label",
        ));
    }
    let a_refs: Vec<&str> = a.iter().map(String::as_str).collect();
    let b_refs: Vec<&str> = b.iter().map(String::as_str).collect();
    Ok(Partition::new(&a_refs, &b_refs)?)
}

fn write_state(rho: &DensityMatrix, path: &Path) -> Result<(), CliError> {
    Ok(save_state(rho, path)?)
}

fn cmd_make(name: &str, cli: &Cli) -> Result<CommandOutcome, CliError> {
    let out = require_out(cli)?;
    let rho = named_state(name, cli.seed)?;
    write_state(&rho, out)?;
    let path = out.display().to_string();
    let payload = match cli.format {
        Format::Text => format!("wrote {name} ({}) to {path}", rho.shape()),
        Format::Tsv => format!("{name}\t{path}"),
        Format::Json => JsonObject::new()
            .str("command", "make")
            .str("name", name)
            .str("path", &path)
            .raw(
                "labels",
                json_array_str(&rho.shape().labels()),
            )
            .build(),
    };
    Ok(CommandOutcome::ok(payload))
}

fn named_state(name: &str, seed: u64) -> Result<DensityMatrix, CliError> {
    let two_qubits = SystemShape::qubits(&["A", "B"])?;
    let state = match name {
        "bell0" => DensityMatrix::bell_state(0)?,
        "bell1" => DensityMatrix::bell_state(1)?,
        "bell2" => DensityMatrix::bell_state(2)?,
        "bell3" => DensityMatrix::bell_state(3)?,
        "ghz3" => DensityMatrix::ghz_state(3)?,
        "caseI" => {
            let a = DensityMatrix::maximally_mixed(&SystemShape::qubits(&["A"])?)?;
            let b = DensityMatrix::maximally_mixed(&SystemShape::qubits(&["B"])?)?;
            DensityMatrix::product_state(&[a, b])?
        }
        "caseII" => {
            let probs = ProbabilityVector::new(vec![0.5, 0.5])?;
            DensityMatrix::classical_mixture(&probs, &[vec![0, 0], vec![1, 1]], &two_qubits)?
        }
        "mixed" => DensityMatrix::random_separable(seed, 4, &two_qubits)?,
        other => {
            return Err(CliError::usage(format!(
                "unknown state name {other:?} (expected bell0..bell3, ghz3, caseI, caseII, mixed)"
            )))
        }
    };
    Ok(state)
}

/// Joined display name of a label set, e.g. ["A", "B"] -> "AB".
fn joined(labels: &[&str]) -> String {
    labels.concat()
}

fn cmd_entropy(cli: &Cli) -> Result<CommandOutcome, CliError> {
    let rho = require_in(cli)?;
    let part = require_partition(cli, rho.shape())?;
    let d = bipartite_diagram(&rho, &part)?;
    let name_a = joined(&part.side_a());
    let name_b = joined(&part.side_b());
    let name_ab = joined(&rho.shape().labels());
    let rows = [
        (format!("S({name_a})"), d.s_a),
        (format!("S({name_b})"), d.s_b),
        (format!("S({name_ab})"), d.s_ab),
        (format!("S({name_a}|{name_b})"), d.s_a_given_b),
        (format!("S({name_b}|{name_a})"), d.s_b_given_a),
        (format!("S({name_a}:{name_b})"), d.s_mutual),
    ];
    let payload = match cli.format {
        Format::Text => aligned_rows(
            &rows
                .iter()
                .map(|(k, v)| (k.clone(), format!("= {} bits", fmt_bits(*v))))
                .collect::<Vec<_>>(),
        ),
        Format::Tsv => rows
            .iter()
            .map(|(k, v)| format!("{k}\t{}", fmt_bits(*v)))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => JsonObject::new()
            .str("side_a", &name_a)
            .str("side_b", &name_b)
            .num("s_a", d.s_a)
            .num("s_b", d.s_b)
            .num("s_ab", d.s_ab)
            .num("s_a_given_b", d.s_a_given_b)
            .num("s_b_given_a", d.s_b_given_a)
            .num("s_mutual", d.s_mutual)
            .build(),
    };
    Ok(CommandOutcome::ok(payload))
}

fn cmd_diagram(cli: &Cli) -> Result<CommandOutcome, CliError> {
    let rho = require_in(cli)?;
    let labels = rho.shape().labels();
    match labels.len() {
        2 => {
            let part = Partition::new(&[labels[0]], &[labels[1]])?;
            let d = bipartite_diagram(&rho, &part)?;
            let (a, b) = (labels[0], labels[1]);
            let payload = match cli.format {
                Format::Text => format!(
                    "(S({a}|{b}), S({a}:{b}), S({b}|{a})) = ({}, {}, {})",
                    fmt_bits(d.s_a_given_b),
                    fmt_bits(d.s_mutual),
                    fmt_bits(d.s_b_given_a)
                ),
                Format::Tsv => [
                    format!("S({a}|{b})\t{}", fmt_bits(d.s_a_given_b)),
                    format!("S({a}:{b})\t{}", fmt_bits(d.s_mutual)),
                    format!("S({b}|{a})\t{}", fmt_bits(d.s_b_given_a)),
                ]
                .join("\n"),
                Format::Json => JsonObject::new()
                    .str("kind", "bipartite")
                    .raw("labels", json_array_str(&labels))
                    .num("s_a_given_b", d.s_a_given_b)
                    .num("s_mutual", d.s_mutual)
                    .num("s_b_given_a", d.s_b_given_a)
                    .num("s_a", d.s_a)
                    .num("s_b", d.s_b)
                    .num("s_ab", d.s_ab)
                    .build(),
            };
            Ok(CommandOutcome::ok(payload))
        }
        3 => {
            let d = ternary_diagram(&rho, &labels)?;
            let (a, b, c) = (labels[0], labels[1], labels[2]);
            let regions = [
                (format!("S({a}|{b}{c})"), d.c_a),
                (format!("S({b}|{a}{c})"), d.c_b),
                (format!("S({c}|{a}{b})"), d.c_c),
                (format!("S({a}:{b}|{c})"), d.m_ab),
                (format!("S({a}:{c}|{b})"), d.m_ac),
                (format!("S({b}:{c}|{a})"), d.m_bc),
                (format!("S({a}:{b}:{c})"), d.center),
            ];
            let payload = match cli.format {
                Format::Text => {
                    let mut rows = vec![("region".to_string(), "bits".to_string())];
                    rows.extend(
                        regions
                            .iter()
                            .map(|(k, v)| (k.clone(), fmt_bits(*v))),
                    );
                    aligned_rows(&rows)
                }
                Format::Tsv => regions
                    .iter()
                    .map(|(k, v)| format!("{k}\t{}", fmt_bits(*v)))
                    .collect::<Vec<_>>()
                    .join("\n"),
                Format::Json => JsonObject::new()
                    .str("kind", "ternary")
                    .raw("labels", json_array_str(&labels))
                    .num("c_a", d.c_a)
                    .num("c_b", d.c_b)
                    .num("c_c", d.c_c)
                    .num("m_ab", d.m_ab)
                    .num("m_ac", d.m_ac)
                    .num("m_bc", d.m_bc)
                    .num("center", d.center)
                    .num("s_a", d.s_a)
                    .num("s_b", d.s_b)
                    .num("s_c", d.s_c)
                    .num("s_ab", d.s_ab)
                    .num("s_ac", d.s_ac)
                    .num("s_bc", d.s_bc)
                    .num("s_abc", d.s_abc)
                    .build(),
            };
            Ok(CommandOutcome::ok(payload))
        }
        n => Err(CliError::usage(format!(
            "diagram supports 2 or 3 subsystems, state has {n}"
        ))),
    }
}

/// Off-diagonal weight small enough to treat the operator as classical.
fn is_diagonal(m: &ComplexMatrix) -> bool {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j && m[(i, j)].norm() > 1e-12 {
                return false;
            }
        }
    }
    true
}

fn cmd_condmat(kind: AmpKind, show: Show, cli: &Cli) -> Result<CommandOutcome, CliError> {
    let rho = require_in(cli)?;
    let part = require_partition(cli, rho.shape())?;
    let amp: ConditionalAmplitude = match kind {
        AmpKind::Cond => conditional_amplitude(&rho, &part)?,
        AmpKind::Mutual => mutual_amplitude(&rho, &part)?,
    };
    let spectrum = amp.spectrum();
    let unclassical = amp.unclassical_eigenvalues();
    let classical_note = is_diagonal(rho.matrix()) && is_diagonal(amp.matrix());

    let kind_name = match amp.kind() {
        AmplitudeKind::Conditional => "conditional",
        AmplitudeKind::Mutual => "mutual",
    };
    let payload = match cli.format {
        Format::Text => {
            let mut lines = vec![
                format!("kind: {kind_name}"),
                format!("method: {}", amp.method()),
                format!("partition: {part}"),
            ];
            if matches!(show, Show::Matrix | Show::Both) {
                lines.push("matrix:".to_string());
                lines.push(matrix_text(amp.matrix()));
            }
            if matches!(show, Show::Spectrum | Show::Both) {
                let s: Vec<String> = spectrum.iter().map(|&x| fmt_bits(x)).collect();
                lines.push(format!("spectrum (ascending): {}", s.join(", ")));
                if unclassical.is_empty() {
                    lines.push("eigenvalues above 1: none".to_string());
                } else {
                    let u: Vec<String> = unclassical.iter().map(|&x| fmt_bits(x)).collect();
                    lines.push(format!(
                        "eigenvalues above 1 (no classical analogue): {}",
                        u.join(", ")
                    ));
                }
            }
            if classical_note {
                lines.push(
                    "note: diagonal state; entries are classical probability ratios".to_string(),
                );
            }
            lines.join("\n")
        }
        Format::Tsv => {
            let mut lines = vec![
                format!("kind\t{kind_name}"),
                format!("method\t{}", amp.method()),
            ];
            if matches!(show, Show::Spectrum | Show::Both) {
                for (k, x) in spectrum.iter().enumerate() {
                    lines.push(format!("eigenvalue_{k}\t{}", fmt_bits(*x)));
                }
            }
            lines.push(format!("unclassical_count\t{}", unclassical.len()));
            lines.join("\n")
        }
        Format::Json => {
            let mut obj = JsonObject::new()
                .str("kind", kind_name)
                .str("method", &amp.method().to_string())
                .str("partition", &part.to_string());
            if matches!(show, Show::Matrix | Show::Both) {
                obj = obj
                    .raw("matrix_re", matrix_json_component(amp.matrix(), true))
                    .raw("matrix_im", matrix_json_component(amp.matrix(), false));
            }
            if matches!(show, Show::Spectrum | Show::Both) {
                obj = obj
                    .raw("spectrum", json_array_f64(&spectrum))
                    .raw("unclassical", json_array_f64(&unclassical));
            }
            obj.bool("classical_diagonal", classical_note).build()
        }
    };
    Ok(CommandOutcome::ok(payload))
}

fn cmd_reduce(keep: &[String], cli: &Cli) -> Result<CommandOutcome, CliError> {
    let rho = require_in(cli)?;
    let out = require_out(cli)?;
    if keep.is_empty() {
        return Err(CliError::usage("missing --keep LABELS"));
    }
    let refs: Vec<&str> = keep.iter().map(String::as_str).collect();
    let reduced = rho.reduce(&refs)?;
    write_state(&reduced, out)?;
    let path = out.display().to_string();
    let kept = reduced.shape().labels().join(",");
    let payload = match cli.format {
        Format::Text => format!("wrote reduced state ({kept}) to {path}"),
        Format::Tsv => format!("{kept}\t{path}"),
        Format::Json => JsonObject::new()
            .str("command", "reduce")
            .raw("kept", json_array_str(&reduced.shape().labels()))
            .str("path", &path)
            .build(),
    };
    Ok(CommandOutcome::ok(payload))
}

fn cmd_check(expect: Option<Expectation>, cli: &Cli) -> Result<CommandOutcome, CliError> {
    let rho = require_in(cli)?;
    let part = require_partition(cli, rho.shape())?;
    let report = check_bounds(&rho, &part)?;
    let verdict = if report.entanglement_witnessed {
        "entangled"
    } else {
        "inconclusive"
    };
    let name_a = joined(&part.side_a());
    let name_b = joined(&part.side_b());
    let payload = match cli.format {
        Format::Text => {
            let rows = vec![
                (
                    format!("S({name_a})"),
                    format!("= {} bits", fmt_bits(report.s_a)),
                ),
                (
                    format!("S({name_b})"),
                    format!("= {} bits", fmt_bits(report.s_b)),
                ),
                (
                    format!("S({name_a}|{name_b})"),
                    format!("= {} bits", fmt_bits(report.s_a_given_b)),
                ),
                (
                    format!("S({name_b}|{name_a})"),
                    format!("= {} bits", fmt_bits(report.s_b_given_a)),
                ),
                (
                    format!("S({name_a}:{name_b})"),
                    format!("= {} bits", fmt_bits(report.s_mutual)),
                ),
            ];
            let mut lines = vec![aligned_rows(&rows)];
            lines.push(format!(
                "classical bound S({name_a}:{name_b}) <= min(S({name_a}), S({name_b})): {}",
                if report.classical_mutual_bound_violated {
                    "violated (impossible classically)"
                } else {
                    "respected"
                }
            ));
            lines.push(format!(
                "quantum ceiling S({name_a}:{name_b}) <= 2 min(S({name_a}), S({name_b})): satisfied (slack {})",
                fmt_bits(-report.araki_lieb_excess)
            ));
            lines.push(format!(
                "negative conditional entropy: {}",
                match (report.negative_conditional_ab, report.negative_conditional_ba) {
                    (true, true) => "both directions".to_string(),
                    (true, false) => format!("S({name_a}|{name_b}) only"),
                    (false, true) => format!("S({name_b}|{name_a}) only"),
                    (false, false) => "none".to_string(),
                }
            ));
            lines.push(format!("verdict: {verdict}"));
            lines.join("\n")
        }
        Format::Tsv => [
            format!("s_a\t{}", fmt_bits(report.s_a)),
            format!("s_b\t{}", fmt_bits(report.s_b)),
            format!("s_ab\t{}", fmt_bits(report.s_ab)),
            format!("s_a_given_b\t{}", fmt_bits(report.s_a_given_b)),
            format!("s_b_given_a\t{}", fmt_bits(report.s_b_given_a)),
            format!("s_mutual\t{}", fmt_bits(report.s_mutual)),
            format!(
                "classical_bound_violated\t{}",
                report.classical_mutual_bound_violated
            ),
            format!("verdict\t{verdict}"),
        ]
        .join("\n"),
        Format::Json => JsonObject::new()
            .str("side_a", &name_a)
            .str("side_b", &name_b)
            .num("s_a", report.s_a)
            .num("s_b", report.s_b)
            .num("s_ab", report.s_ab)
            .num("s_a_given_b", report.s_a_given_b)
            .num("s_b_given_a", report.s_b_given_a)
            .num("s_mutual", report.s_mutual)
            .bool(
                "classical_mutual_bound_violated",
                report.classical_mutual_bound_violated,
            )
            .bool("araki_lieb_satisfied", report.araki_lieb_satisfied)
            .num("araki_lieb_excess", report.araki_lieb_excess)
            .bool("negative_conditional_ab", report.negative_conditional_ab)
            .bool("negative_conditional_ba", report.negative_conditional_ba)
            .str("verdict", verdict)
            .build(),
    };
    match expect {
        Some(e) => {
            let expected = match e {
                Expectation::Entangled => "entangled",
                Expectation::Inconclusive => "inconclusive",
            };
            if expected == verdict {
                Ok(CommandOutcome::ok(payload))
            } else {
                Ok(CommandOutcome {
                    payload,
                    exit_code: 1,
                    note: Some(format!("check failed: expected {expected}, found {verdict}")),
                })
            }
        }
        None => Ok(CommandOutcome::ok(payload)),
    }
}

fn cmd_trotter(n_max: usize, cli: &Cli) -> Result<CommandOutcome, CliError> {
    if n_max == 0 || !n_max.is_power_of_two() || n_max > (1 << 20) {
        return Err(CliError::usage(format!(
            "--n-max must be a power of two between 1 and 2^20, got {n_max}"
        )));
    }
    let rho = require_in(cli)?;
    let part = require_partition(cli, rho.shape())?;
    let schedule: Vec<usize> = std::iter::successors(Some(1usize), |&n| {
        if n < n_max {
            Some(n * 2)
        } else {
            None
        }
    })
    .collect();
    let steps = trotter_sequence(&rho, &part, &schedule)?;
    let commuting = steps.last().map(|s| s.distance <= 1e-9).unwrap_or(false)
        && steps.first().map(|s| s.distance <= 1e-9).unwrap_or(false);
    let payload = match cli.format {
        Format::Text => {
            let mut rows = vec![("n".to_string(), "distance to limit".to_string())];
            rows.extend(
                steps
                    .iter()
                    .map(|s| (s.n.to_string(), fmt_sci(s.distance))),
            );
            let mut text = aligned_rows(&rows);
            if commuting {
                text.push_str(
                    "\nfinite products match the limit at round-off level: the state and its conditioned marginal commute",
                );
            } else if let (Some(first), Some(last)) = (steps.first(), steps.last()) {
                text.push_str(&format!(
                    "\ndistance shrank from {} (n={}) to {} (n={})",
                    fmt_sci(first.distance),
                    first.n,
                    fmt_sci(last.distance),
                    last.n
                ));
            }
            text
        }
        Format::Tsv => steps
            .iter()
            .map(|s| format!("{}\t{}", s.n, fmt_sci(s.distance)))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => {
            let orders: Vec<String> = steps.iter().map(|s| s.n.to_string()).collect();
            let distances: Vec<f64> = steps.iter().map(|s| s.distance).collect();
            JsonObject::new()
                .str("partition", &part.to_string())
                .raw("n", format!("[{}]", orders.join(", ")))
                .raw("distance", json_array_f64(&distances))
                .bool("commuting", commuting)
                .build()
        }
    };
    Ok(CommandOutcome::ok(payload))
}
