//! Deterministic JSON output.
//!
//! Reports and canonical spec files are rendered through one writer so that
//! repeated runs on the same input produce byte-identical bytes: object keys
//! are emitted in sorted order and every float is written with 17 significant
//! digits, enough to round-trip an `f64` exactly.

use glass_core::analysis::{CycleClassification, CycleSpec, Verdict};

/// A JSON value built by the CLI. Object entries may be inserted in any
/// order; rendering sorts them by key.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    pub fn num_opt(x: Option<f64>) -> Json {
        x.map_or(Json::Null, Json::Num)
    }

    pub fn numbers(xs: &[f64]) -> Json {
        Json::Arr(xs.iter().map(|&x| Json::Num(x)).collect())
    }

    /// Renders the value followed by a trailing newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Num(x) => out.push_str(&fmt_f64(*x)),
            Json::Str(s) => write_string(out, s),
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    pad(out, indent + 2);
                    item.write(out, indent + 2);
                }
                out.push('\n');
                pad(out, indent);
                out.push(']');
            }
            Json::Obj(entries) => {
                if entries.is_empty() {
                    out.push_str("{}");
                    return;
                }
                let mut sorted: Vec<&(String, Json)> = entries.iter().collect();
                sorted.sort_by(|a, b| a.0.cmp(&b.0));
                out.push('{');
                for (i, (key, value)) in sorted.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    pad(out, indent + 2);
                    write_string(out, key);
                    out.push_str(": ");
                    value.write(out, indent + 2);
                }
                out.push('\n');
                pad(out, indent);
                out.push('}');
            }
        }
    }
}

fn pad(out: &mut String, n: usize) {
    for _ in 0..n {
        out.push(' ');
    }
}

fn write_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

/// 17 significant digits in scientific notation; round-trips every finite
/// `f64`. Non-finite values have no JSON representation and render as null.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x)
    } else {
        "null".into()
    }
}

/// Report for one classified cycle, ready for rendering.
pub fn analysis_json(digest: &str, cycle: &CycleSpec, c: &CycleClassification) -> Json {
    let verdict = match c.verdict {
        Verdict::IdealUniqueOrbit => "IdealUniqueOrbit",
        Verdict::UniqueOrbit => "UniqueOrbit",
        Verdict::Degenerate => "Degenerate",
    };
    let (inv_holds, inv_margin) = match &c.certificates.invariance {
        Some(ck) => (Json::Bool(ck.holds), Json::Num(ck.margin)),
        None => (Json::Null, Json::Null),
    };
    let certificates = Json::Obj(vec![
        ("eigen_residual".into(), Json::num_opt(c.certificates.eigen_residual)),
        ("contraction_rate".into(), Json::num_opt(c.certificates.contraction_rate)),
        ("invariance_holds".into(), inv_holds),
        ("invariance_margin".into(), inv_margin),
        ("marginal".into(), Json::Bool(c.marginal)),
    ]);
    let waypoints = Json::Arr(
        c.waypoints
            .as_deref()
            .unwrap_or(&[])
            .iter()
            .map(|w| {
                Json::Obj(vec![
                    ("cumulative_time".into(), Json::Num(w.cumulative_time)),
                    ("point".into(), Json::numbers(&w.point)),
                    ("wall".into(), Json::str(w.wall.to_string())),
                ])
            })
            .collect(),
    );
    Json::Obj(vec![
        ("network_digest".into(), Json::str(digest)),
        ("cycle".into(), Json::Arr(cycle.regions().iter().map(|r| Json::str(r.to_string())).collect())),
        ("verdict".into(), Json::str(verdict)),
        ("lambda".into(), Json::Num(c.lambda)),
        ("fixed_point".into(), c.fixed_point.as_deref().map_or(Json::Null, Json::numbers)),
        ("period".into(), Json::num_opt(c.period)),
        ("orbit_waypoints".into(), waypoints),
        ("certificates".into(), certificates),
        ("tool_version".into(), Json::str(env!("CARGO_PKG_VERSION"))),
    ])
}
