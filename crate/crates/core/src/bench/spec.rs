//! Channel-spec grammar:
//!
//! ```text
//! ad:<gamma> | cq:<a> | nalpha:<alpha> | identity:<d>
//! classical:<path to JSON rows> | kraus:<path to channel JSON>
//! <spec> x <spec>
//! ```

use serde::Deserialize;

use crate::channel::{self, QuantumChannel};
use crate::error::{Error, Result};

/// A channel together with the extra data some bounds need.
#[derive(Clone, Debug)]
pub struct ParsedChannel {
    pub channel: QuantumChannel,
    /// Row-stochastic matrix `p[x][y]` for classical channels and their
    /// tensor products.
    pub classical: Option<Vec<Vec<f64>>>,
    /// Damping parameter of a plain amplitude-damping channel.
    pub damping: Option<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ClassicalFile {
    Rows(Vec<Vec<f64>>),
    Object { p: Vec<Vec<f64>> },
}

fn number(kind: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("`{kind}:{s}`: expected a number")))
}

fn parse_atom(s: &str) -> Result<ParsedChannel> {
    let (kind, arg) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("channel spec `{s}` has no `kind:` prefix")))?;
    let plain = |channel| ParsedChannel { channel, classical: None, damping: None };
    match kind.trim().to_ascii_lowercase().as_str() {
        "ad" => {
            let g = number(kind, arg)?;
            Ok(ParsedChannel { channel: channel::amplitude_damping(g)?, classical: None, damping: Some(g) })
        }
        "cq" => Ok(plain(channel::cq_two_state(number(kind, arg)?)?)),
        "nalpha" => Ok(plain(channel::n_alpha(number(kind, arg)?)?)),
        "identity" => {
            let d: usize = arg
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("`identity:{arg}`: expected a positive integer")))?;
            Ok(plain(channel::identity(d)?))
        }
        "classical" => {
            let text = std::fs::read_to_string(arg.trim())?;
            let p = match serde_json::from_str::<ClassicalFile>(&text)? {
                ClassicalFile::Rows(p) | ClassicalFile::Object { p } => p,
            };
            let ch = channel::classical_channel(&p)?;
            Ok(ParsedChannel { channel: ch, classical: Some(p), damping: None })
        }
        "kraus" => Ok(plain(QuantumChannel::from_json_file(arg.trim())?)),
        other => Err(Error::Parse(format!("unknown channel kind `{other}`"))),
    }
}

fn kron_rows(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for ra in a {
        for rb in b {
            out.push(ra.iter().flat_map(|&x| rb.iter().map(move |&y| x * y)).collect());
        }
    }
    out
}

/// Parses a channel spec; ` x ` separates tensor factors.
pub fn parse_channel(spec: &str) -> Result<ParsedChannel> {
    let mut parts = spec.split(" x ").map(str::trim);
    let first = parts.next().filter(|s| !s.is_empty()).ok_or_else(|| Error::Parse("empty channel spec".into()))?;
    let mut acc = parse_atom(first)?;
    let mut factors = 1;
    for part in parts {
        let next = parse_atom(part)?;
        let channel = acc.channel.tensor(&next.channel)?;
        let classical = match (&acc.classical, &next.classical) {
            (Some(a), Some(b)) => Some(kron_rows(a, b)),
            _ => None,
        };
        acc = ParsedChannel { channel, classical, damping: None };
        factors += 1;
    }
    if factors > 1 {
        acc.channel = acc.channel.with_label(spec.trim());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms() {
        let ad = parse_channel("ad:0.3").unwrap();
        assert_eq!((ad.channel.d_in(), ad.channel.d_out()), (2, 2));
        assert_eq!(ad.damping, Some(0.3));
        assert_eq!(parse_channel("nalpha:0.5").unwrap().channel.d_in(), 3);
        assert_eq!(parse_channel("identity:4").unwrap().channel.d_out(), 4);
        assert!(parse_channel("ad:1.5").is_err());
        assert!(parse_channel("ad:x").is_err());
        assert!(parse_channel("foo:1").is_err());
        assert!(parse_channel("ad").is_err());
        assert!(parse_channel("").is_err());
        assert!(parse_channel("identity:0").is_err());
    }

    #[test]
    fn tensor_products() {
        let t = parse_channel("ad:0.3 x cq:0.75").unwrap();
        assert_eq!((t.channel.d_in(), t.channel.d_out()), (4, 4));
        assert_eq!(t.damping, None);
        assert_eq!(t.channel.label(), "ad:0.3 x cq:0.75");
    }

    #[test]
    fn classical_files() {
        let dir = std::env::temp_dir().join(format!("qcap-spec-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let rows = dir.join("rows.json");
        std::fs::write(&rows, "[[0.9, 0.1], [0.1, 0.9]]").unwrap();
        let obj = dir.join("obj.json");
        std::fs::write(&obj, r#"{"p": [[1.0, 0.0, 0.0], [0.0, 0.5, 0.5]]}"#).unwrap();
        let a = parse_channel(&format!("classical:{}", rows.display())).unwrap();
        assert_eq!(a.classical.as_ref().unwrap().len(), 2);
        let b = parse_channel(&format!("classical:{}", obj.display())).unwrap();
        assert_eq!((b.channel.d_in(), b.channel.d_out()), (2, 3));
        let t = parse_channel(&format!("classical:{} x classical:{}", rows.display(), obj.display())).unwrap();
        let p = t.classical.unwrap();
        assert_eq!((p.len(), p[0].len()), (4, 6));
        assert!((p[1][1] - 0.45).abs() < 1e-15 && p[1][3] == 0.0);
        let bad = dir.join("bad.json");
        std::fs::write(&bad, "[[0.5, 0.4]]").unwrap();
        assert!(parse_channel(&format!("classical:{}", bad.display())).is_err());
        assert!(parse_channel("classical:/nonexistent/file.json").is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
