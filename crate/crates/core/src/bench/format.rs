//! Byte-stable CSV/JSON rendering of sweep rows.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Parse(format!("unknown format `{other}` (csv or json)"))),
        }
    }
}

/// One bound evaluated at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub bound: String,
    pub value_log: Option<f64>,
    pub value_linear: Option<f64>,
    /// Solver status, `"n/a"` for closed-form quantities, or `"error"`.
    pub status: String,
    pub gap: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn flagged(&self) -> bool {
        self.error.is_some()
    }
}

/// Formats `x` with 9 significant digits, plain notation for exponents in
/// `[-5, 9)` and scientific otherwise.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let s = format!("{:.*}", (8 - exp) as usize, x);
        trim_zeros(&s)
    } else {
        format!("{}e{exp}", trim_zeros(mant))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

/// Rounds through the 9-digit text form so JSON numbers match the CSV.
fn rounded(x: Option<f64>) -> serde_json::Value {
    match x {
        Some(v) if v.is_finite() => {
            let r: f64 = fmt_sig(v).parse().expect("formatted float parses");
            serde_json::Value::from(r)
        }
        _ => serde_json::Value::Null,
    }
}

#[derive(Serialize)]
struct JsonRow<'a> {
    param: serde_json::Value,
    bound: &'a str,
    value_log: serde_json::Value,
    value_linear: serde_json::Value,
    status: &'a str,
    gap: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

/// Renders rows. With a single bound the CSV columns are
/// `param,value_log,value_linear,status,gap`; with several, a `bound` column
/// follows `param`.
pub fn render_rows(rows: &[SweepRow], format: OutputFormat) -> String {
    let multi = rows.iter().any(|r| r.bound != rows[0].bound);
    match format {
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str(if multi { "param,bound,value_log,value_linear,status,gap\n" } else { "param,value_log,value_linear,status,gap\n" });
            for r in rows {
                out.push_str(&fmt_sig(r.param));
                if multi {
                    out.push(',');
                    out.push_str(&r.bound);
                }
                for field in [opt(r.value_log), opt(r.value_linear), r.status.clone(), opt(r.gap)] {
                    out.push(',');
                    out.push_str(&field);
                }
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let rows: Vec<JsonRow> = rows
                .iter()
                .map(|r| JsonRow {
                    param: rounded(Some(r.param)),
                    bound: &r.bound,
                    value_log: rounded(r.value_log),
                    value_linear: rounded(r.value_linear),
                    status: &r.status,
                    gap: rounded(r.gap),
                    error: r.error.as_deref(),
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
            s.push('\n');
            s
        }
    }
}

/// Matplotlib script that plots `value_log` against `param` from a CSV
/// written by `render_rows`.
pub fn plot_script(csv_name: &str, xlabel: &str) -> String {
    format!(
        r#"# Plots a qcap sweep. Edit freely.
import csv
import collections
import matplotlib.pyplot as plt

series = collections.defaultdict(lambda: ([], []))
with open({csv_name:?}) as fh:
    for row in csv.DictReader(fh):
        if row["status"] == "error" or row["value_log"] == "":
            continue
        xs, ys = series[row.get("bound", "value_log")]
        xs.append(float(row["param"]))
        ys.append(float(row["value_log"]))

for name, (xs, ys) in sorted(series.items()):
    plt.plot(xs, ys, marker=".", label=name)
plt.xlabel({xlabel:?})
plt.ylabel("bits")
plt.legend()
plt.savefig({png:?}, dpi=150)
"#,
        png = format!("{}.png", csv_name.trim_end_matches(".csv")),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(0.1 + 0.2), "0.3");
        assert_eq!(fmt_sig(0.771553490), "0.77155349");
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265");
        assert_eq!(fmt_sig(-2.5e-7), "-2.5e-7");
        assert_eq!(fmt_sig(1.23456789e12), "1.23456789e12");
        assert_eq!(fmt_sig(123456789.4), "123456789");
        assert_eq!(fmt_sig(9.999999999), "10");
        assert_eq!(fmt_sig(f64::NAN), "nan");
        assert_eq!(fmt_sig(f64::NEG_INFINITY), "-inf");
    }

    fn row(param: f64, bound: &str) -> SweepRow {
        SweepRow {
            param,
            bound: bound.into(),
            value_log: Some(0.5),
            value_linear: Some(2f64.sqrt()),
            status: "optimal".into(),
            gap: Some(1e-10),
            error: None,
        }
    }

    #[test]
    fn csv_layout() {
        let s = render_rows(&[row(0.0, "beta"), row(0.05, "beta")], OutputFormat::Csv);
        assert_eq!(s, "param,value_log,value_linear,status,gap\n0,0.5,1.41421356,optimal,1e-10\n0.05,0.5,1.41421356,optimal,1e-10\n");
        let s = render_rows(&[row(0.0, "beta"), row(0.0, "eacap")], OutputFormat::Csv);
        assert!(s.starts_with("param,bound,value_log"));
        assert!(s.contains("\n0,eacap,"));
    }

    #[test]
    fn json_matches_csv_rounding() {
        let mut r = row(0.1, "beta");
        r.value_log = None;
        let s = render_rows(&[r], OutputFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v[0]["value_linear"].as_f64().unwrap(), 1.41421356);
        assert!(v[0]["value_log"].is_null());
        assert!(v[0].get("error").is_none());
    }

    #[test]
    fn plot_stub_mentions_columns() {
        let s = plot_script("out.csv", "gamma");
        assert!(s.contains("\"param\"") && s.contains("\"value_log\"") && s.contains("out.png"));
    }
}
