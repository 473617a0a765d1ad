//! Reading node and measure files; writing CSV tables.
//!
//! Floats are written in the shortest form that parses back to the same
//! value, so identical runs give identical files.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::experiments::SweepResult;
use crate::nodal::NodalSystem;
use crate::opuc::MeasureSpec;
use crate::transforms::IntervalNodalSystem;
use crate::{angle_0_2pi, cis, Error, Result};

/// Shortest round-trip decimal for `x`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Nodes from text: either a JSON array of `[re, im]` pairs (or of plain
/// angles), or one angle per line. Blank lines and `#` comments are
/// ignored.
pub fn parse_nodes(text: &str) -> Result<Vec<Complex64>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let v: serde_json::Value = serde_json::from_str(trimmed)?;
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("node file must hold a JSON array".into()))?;
        return arr
            .iter()
            .enumerate()
            .map(|(i, item)| match item {
                serde_json::Value::Number(t) => Ok(cis(t.as_f64().unwrap_or(f64::NAN))),
                serde_json::Value::Array(pair) if pair.len() == 2 => {
                    let re = pair[0].as_f64();
                    let im = pair[1].as_f64();
                    match (re, im) {
                        (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                        _ => Err(Error::Parse(format!("node {i}: expected two numbers"))),
                    }
                }
                _ => Err(Error::Parse(format!("node {i}: expected [re, im] or an angle"))),
            })
            .collect();
    }
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            l.parse::<f64>()
                .map(cis)
                .map_err(|_| Error::Parse(format!("line {}: {l:?} is not an angle", i + 1)))
        })
        .collect()
}

pub fn read_nodes(path: &Path) -> Result<Vec<Complex64>> {
    parse_nodes(&std::fs::read_to_string(path)?)
}

/// On-disk measure description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureFile {
    Lebesgue,
    /// Finitely many Verblunsky coefficients, the rest zero.
    Verblunsky { alphas: Vec<[f64; 2]> },
    /// Weight `1/|h(e^{iθ})|²`, `h` given by ascending coefficients.
    BernsteinSzego { h_coeffs: Vec<[f64; 2]> },
}

impl MeasureFile {
    pub fn to_measure(&self) -> Result<MeasureSpec> {
        let c = |v: &[[f64; 2]]| v.iter().map(|p| Complex64::new(p[0], p[1])).collect::<Vec<_>>();
        match self {
            MeasureFile::Lebesgue => Ok(MeasureSpec::lebesgue()),
            MeasureFile::Verblunsky { alphas } => MeasureSpec::finite_verblunsky(c(alphas)),
            MeasureFile::BernsteinSzego { h_coeffs } => MeasureSpec::bernstein_szego(c(h_coeffs)),
        }
    }

    pub fn label(&self) -> String {
        let list = |v: &[[f64; 2]]| {
            v.iter()
                .map(|p| format!("{}{:+}i", fmt_f64(p[0]), p[1]))
                .collect::<Vec<_>>()
                .join(";")
        };
        match self {
            MeasureFile::Lebesgue => "lebesgue".into(),
            MeasureFile::Verblunsky { alphas } => format!("verblunsky[{}]", list(alphas)),
            MeasureFile::BernsteinSzego { h_coeffs } => format!("bernstein-szego[{}]", list(h_coeffs)),
        }
    }
}

pub fn parse_measure(text: &str) -> Result<MeasureFile> {
    Ok(serde_json::from_str(text)?)
}

/// `lebesgue` or a path to a measure JSON file.
pub fn load_measure(arg: &str) -> Result<MeasureFile> {
    if arg == "lebesgue" {
        return Ok(MeasureFile::Lebesgue);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(Error::InvalidArgument(format!("measure file {arg:?} does not exist")));
    }
    parse_measure(&std::fs::read_to_string(path)?)
}

/// Writes a CSV table; fields must not contain commas.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `j, theta, re, im` with 1-based `j` and `θ ∈ [0, 2π)`.
pub fn nodes_csv(system: &NodalSystem) -> String {
    csv_table(
        &["j", "theta", "re", "im"],
        system.nodes().iter().enumerate().map(|(j, z)| {
            vec![
                (j + 1).to_string(),
                fmt_f64(angle_0_2pi(*z)),
                fmt_f64(z.re),
                fmt_f64(z.im),
            ]
        }),
    )
}

/// `j, x, theta, endpoint`.
pub fn interval_nodes_csv(sys: &IntervalNodalSystem) -> String {
    csv_table(
        &["j", "x", "theta", "endpoint"],
        sys.rows()
            .into_iter()
            .map(|(j, x, t, e)| vec![j.to_string(), fmt_f64(x), fmt_f64(t), (e as u8).to_string()]),
    )
}

/// `n, p, q, s, sup_error, lebesgue_max, B_hat, L_hat`.
pub fn sweep_csv(res: &SweepResult) -> String {
    csv_table(
        &["n", "p", "q", "s", "sup_error", "lebesgue_max", "B_hat", "L_hat"],
        (0..res.len()).map(|i| {
            vec![
                res.ns[i].to_string(),
                res.p[i].to_string(),
                res.q[i].to_string(),
                res.s[i].to_string(),
                fmt_f64(res.sup_errors[i]),
                fmt_f64(res.lebesgue_maxima[i]),
                fmt_f64(res.b_hats[i]),
                fmt_f64(res.l_hats[i]),
            ]
        }),
    )
}

/// Writes `contents`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

/// `re,im` with shortest round-trip parts.
pub fn fmt_complex(z: Complex64) -> String {
    let mut s = fmt_f64(z.re);
    let _ = write!(s, ",{}", fmt_f64(z.im));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02e23, -0.0, 2.0f64.sqrt()] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_complex(Complex64::new(1.0, -0.25)), "1.0,-0.25");
    }

    #[test]
    fn node_formats() {
        let a = parse_nodes("# angles\n0\n1.5\n\n3.0 # last\n").unwrap();
        assert_eq!(a.len(), 3);
        assert!((a[1] - cis(1.5)).norm() < 1e-16);
        let b = parse_nodes("[[1, 0], [0, 1], [-1, 0]]").unwrap();
        assert_eq!(b[1], Complex64::new(0.0, 1.0));
        let c = parse_nodes("[0.0, 2.0]").unwrap();
        assert_eq!(c.len(), 2);
        assert!(parse_nodes("0\nabc\n").is_err());
        assert!(parse_nodes("[[1, 0, 2]]").is_err());
    }

    #[test]
    fn measure_files() {
        let m = parse_measure(r#"{"kind": "verblunsky", "alphas": [[0.5, 0.0]]}"#).unwrap();
        assert_eq!(m.to_measure().unwrap().verblunsky(2).unwrap()[0], Complex64::new(0.5, 0.0));
        let m = parse_measure(r#"{"kind": "bernstein-szego", "h_coeffs": [[1, 0], [-0.5, 0]]}"#).unwrap();
        let a = m.to_measure().unwrap().verblunsky(2).unwrap();
        assert!((a[0] - Complex64::new(0.5, 0.0)).norm() < 1e-9);
        assert_eq!(parse_measure(r#"{"kind": "lebesgue"}"#).unwrap(), MeasureFile::Lebesgue);
        assert!(parse_measure(r#"{"kind": "gaussian"}"#).is_err());
        assert!(load_measure("/nonexistent/measure.json").is_err());
    }

    #[test]
    fn node_csv_layout() {
        let s = crate::nodal::roots_of_unimodular(2, Complex64::new(1.0, 0.0)).unwrap();
        let csv = nodes_csv(&s);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("j,theta,re,im"));
        assert_eq!(lines.next(), Some("1,0.0,1.0,0.0"));
        assert_eq!(csv.lines().count(), 3);
    }
}
