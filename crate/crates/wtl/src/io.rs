//! Plain-text interchange: key-value configs, CSV tables and JSON-shaped
//! report documents. All numeric output uses decimal scientific notation
//! with 17 significant digits so artifacts diff cleanly across platforms.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model_spaces::{EigenFamily, EigenSequence, ModelSpace, WidthSequence};
use crate::Real;

/// 17 significant digits, scientific notation.
pub fn fmt_sci<F: Real>(x: F) -> String {
    format!("{:.16e}", x.as_f64())
}

/// Counts print as plain integers; anything non-representable falls back to
/// scientific notation.
pub fn fmt_count<F: Real>(count: Option<u64>, real: F) -> String {
    match count {
        Some(n) => format!("{n}"),
        None => fmt_sci(real),
    }
}

pub fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Serialize an index/value sequence as CSV with header `index,value`.
pub fn sequence_csv<F: Real>(values: &[F]) -> String {
    let mut out = String::from("index,value\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i, fmt_sci(*v)));
    }
    out
}

pub fn eigen_csv<F: Real>(eigs: &EigenSequence<F>) -> String {
    sequence_csv(eigs.values())
}

pub fn width_csv<F: Real>(widths: &WidthSequence<F>) -> String {
    sequence_csv(widths.values())
}

/// Parse a `key = value` configuration file. `#` starts a comment; blank
/// lines are skipped. Later keys override earlier ones.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_field<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<T> {
    let raw = map
        .get(key)
        .ok_or_else(|| Error::Parse(format!("missing key `{key}`")))?;
    raw.parse()
        .map_err(|_| Error::Parse(format!("key `{key}`: cannot parse `{raw}`")))
}

/// Build a model space plus requested sequence length from a key-value map.
///
/// Recognized keys: `family` (geometric | stretched-exponential | explicit),
/// `omega`, `c`, `kappa`, `values` (comma list, explicit family), `d`,
/// `count`.
pub fn model_space_from_kv<F: Real>(
    map: &BTreeMap<String, String>,
) -> Result<(ModelSpace<F>, usize)> {
    let family = map
        .get("family")
        .ok_or_else(|| Error::Parse("missing key `family`".into()))?;
    let fam = match family.as_str() {
        "geometric" => EigenFamily::Geometric {
            omega: F::of(parse_field::<f64>(map, "omega")?),
        },
        "stretched-exponential" => EigenFamily::StretchedExponential {
            c: F::of(parse_field::<f64>(map, "c")?),
            kappa: F::of(parse_field::<f64>(map, "kappa")?),
        },
        "explicit" => {
            let raw = map
                .get("values")
                .ok_or_else(|| Error::Parse("explicit family needs `values`".into()))?;
            let vals = raw
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map(F::of)
                        .map_err(|_| Error::Parse(format!("bad value `{s}` in `values`")))
                })
                .collect::<Result<Vec<F>>>()?;
            EigenFamily::Explicit(vals)
        }
        other => return Err(Error::Parse(format!("unknown family `{other}`"))),
    };
    let d: usize = match map.get("d") {
        Some(_) => parse_field(map, "d")?,
        None => 1,
    };
    let count: usize = parse_field(map, "count")?;
    Ok((ModelSpace::isotropic(d, fam)?, count))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sci_format_has_17_significant_digits() {
        assert_eq!(fmt_sci(1.0f64), "1.0000000000000000e0");
        assert_eq!(fmt_sci(0.5f64), "5.0000000000000000e-1");
    }

    #[test]
    fn kv_roundtrip_with_comments() {
        let map = parse_kv("# spaces\nfamily = geometric\nomega = 0.25 # tail\n\nd=2\ncount = 4\n")
            .unwrap();
        assert_eq!(map["family"], "geometric");
        assert_eq!(map["omega"], "0.25");
        let (space, count) = model_space_from_kv::<f64>(&map).unwrap();
        assert_eq!(space.dim(), 2);
        assert_eq!(count, 4);
    }

    #[test]
    fn kv_rejects_malformed_lines() {
        assert!(parse_kv("family geometric").is_err());
    }

    #[test]
    fn explicit_family_parses_value_list() {
        let map = parse_kv("family = explicit\nvalues = 0.9, 0.9, 0.1\ncount = 3\n").unwrap();
        let (space, _) = model_space_from_kv::<f64>(&map).unwrap();
        assert_eq!(space.dim(), 1);
    }
}
