//! Text, JSON and TSV rendering helpers.
//!
//! Text output uses 6 fixed decimals; JSON carries 17 significant digits so
//! values survive a round trip. Negative zero never reaches the user.

use num_complex::Complex64;
use qinfo::linmath::ComplexMatrix;

/// Maps `-0.0` to `0.0`, leaving every other value alone.
pub fn normalize_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// Fixed 6-decimal rendering for text output.
pub fn fmt_bits(x: f64) -> String {
    let s = format!("{:.6}", normalize_zero(x));
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// Scientific rendering for quantities spanning many decades.
pub fn fmt_sci(x: f64) -> String {
    format!("{:.6e}", normalize_zero(x))
}

/// JSON number with 17 significant digits (round-trips `f64` exactly).
pub fn json_f64(x: f64) -> String {
    format!("{:.16e}", normalize_zero(x))
}

pub fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization")
}

pub fn json_array_f64(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|&x| json_f64(x)).collect();
    format!("[{}]", items.join(", "))
}

pub fn json_array_str(xs: &[&str]) -> String {
    let items: Vec<String> = xs.iter().map(|s| json_str(s)).collect();
    format!("[{}]", items.join(", "))
}

/// Incremental JSON object writer; keys appear in insertion order.
pub struct JsonObject {
    fields: Vec<String>,
}

impl JsonObject {
    pub fn new() -> Self {
        Self { fields: Vec::new() }
    }

    pub fn str(mut self, key: &str, value: &str) -> Self {
        self.fields.push(format!("{}: {}", json_str(key), json_str(value)));
        self
    }

    pub fn num(mut self, key: &str, value: f64) -> Self {
        self.fields.push(format!("{}: {}", json_str(key), json_f64(value)));
        self
    }

    pub fn bool(mut self, key: &str, value: bool) -> Self {
        self.fields.push(format!("{}: {value}", json_str(key)));
        self
    }

    /// Pre-rendered JSON fragment (array or object).
    pub fn raw(mut self, key: &str, value: String) -> Self {
        self.fields.push(format!("{}: {value}", json_str(key)));
        self
    }

    pub fn build(self) -> String {
        format!("{{{}}}", self.fields.join(", "))
    }
}

/// `re+imi` with both components at 6 decimals, e.g. `0.500000-0.500000i`.
pub fn fmt_complex(z: Complex64) -> String {
    let re = fmt_bits(z.re);
    let im_raw = normalize_zero(z.im);
    let im = if im_raw < 0.0 {
        format!("-{}", fmt_bits(-im_raw))
    } else {
        format!("+{}", fmt_bits(im_raw))
    };
    format!("{re}{im}i")
}

/// Matrix as rows of 6-decimal complex entries.
pub fn matrix_text(m: &ComplexMatrix) -> String {
    let mut lines = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| fmt_complex(m[(i, j)])).collect();
        lines.push(format!("  {}", row.join("  ")));
    }
    lines.join("\n")
}

/// Matrix real or imaginary parts as a JSON array of arrays.
pub fn matrix_json_component(m: &ComplexMatrix, real: bool) -> String {
    let mut rows = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let row: Vec<f64> = (0..m.cols())
            .map(|j| {
                let z = m[(i, j)];
                if real {
                    z.re
                } else {
                    z.im
                }
            })
            .collect();
        rows.push(json_array_f64(&row));
    }
    format!("[{}]", rows.join(", "))
}

/// Two-column table with the first column padded to a common width.
pub fn aligned_rows(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}
