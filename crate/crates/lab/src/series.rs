//! Time series of norms and their CSV form.
//!
//! ```text
//! # key=value          metadata lines
//! t,l2_total,...       header
//! 1.0000000000000000e0,...
//! ```

use std::fmt::Write as _;

use crate::error::{LabError, Result};
use crate::state::NormReport;

/// Columns written for every run, in order.
pub const BASE_COLUMNS: [&str; 12] = [
    "l2_total",
    "l2_n",
    "l2_v",
    "l2_E",
    "l2_grad",
    "linf_total",
    "constraint_linear",
    "constraint_nonlinear",
    "curl_residual",
    "l2_dt",
    "h1_v",
    "l1_total",
];

pub const BAND_COLUMNS: [&str; 3] = ["band_low", "band_mid", "band_high"];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DecaySeries {
    pub times: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
    pub metadata: Vec<(String, String)>,
}

impl DecaySeries {
    pub fn with_columns<S: AsRef<str>>(names: &[S]) -> Self {
        Self {
            times: Vec::new(),
            columns: names.iter().map(|n| (n.as_ref().to_string(), Vec::new())).collect(),
            metadata: Vec::new(),
        }
    }

    pub fn set_meta(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.metadata.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key.to_string(), value)),
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn meta_f64(&self, key: &str) -> Option<f64> {
        self.meta(key).and_then(|v| v.parse().ok())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    /// Append one row; times must increase strictly.
    pub fn push(&mut self, t: f64, values: &[f64]) -> Result<()> {
        if values.len() != self.columns.len() {
            return Err(LabError::Dimension { expected: self.columns.len(), got: values.len() });
        }
        if let Some(&last) = self.times.last() {
            if !(t > last) {
                return Err(LabError::Input(format!("times must increase: {t} after {last}")));
            }
        }
        self.times.push(t);
        for ((_, col), v) in self.columns.iter_mut().zip(values) {
            col.push(*v);
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push('t');
        for (name, _) in &self.columns {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, t) in self.times.iter().enumerate() {
            let _ = write!(out, "{t:.16e}");
            for (_, col) in &self.columns {
                let _ = write!(out, ",{:.16e}", col[i]);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut series = DecaySeries::default();
        let mut header: Option<usize> = None;
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                if let Some((k, v)) = meta.trim().split_once('=') {
                    series.set_meta(k.trim(), v.trim());
                }
                continue;
            }
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            match header {
                None => {
                    if cells.first() != Some(&"t") {
                        return Err(LabError::Parse { line: line_no, reason: "header must start with `t`".into() });
                    }
                    series.columns = cells[1..].iter().map(|c| (c.to_string(), Vec::new())).collect();
                    header = Some(cells.len());
                }
                Some(width) => {
                    if cells.len() != width {
                        return Err(LabError::Parse {
                            line: line_no,
                            reason: format!("expected {width} fields, found {}", cells.len()),
                        });
                    }
                    let values = cells
                        .iter()
                        .map(|c| {
                            c.parse::<f64>().map_err(|_| LabError::Parse {
                                line: line_no,
                                reason: format!("`{c}` is not a number"),
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    series.push(values[0], &values[1..]).map_err(|e| LabError::Parse {
                        line: line_no,
                        reason: e.to_string(),
                    })?;
                }
            }
        }
        if header.is_none() {
            return Err(LabError::Parse { line: text.lines().count().max(1), reason: "missing header".into() });
        }
        Ok(series)
    }
}

/// Values of [`BASE_COLUMNS`] from a report.
pub fn base_values(r: &NormReport) -> [f64; 12] {
    [
        r.l2_total,
        r.l2_n,
        r.l2_v,
        r.l2_e,
        r.l2_grad,
        r.linf_total,
        r.constraint_linear,
        r.constraint_nonlinear,
        r.curl_residual,
        r.l2_dt,
        r.h1_v,
        r.l1_total,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let mut s = DecaySeries::with_columns(&["a", "b"]);
        s.set_meta("box_half_width", 60.0);
        s.push(1.0, &[0.1, 1.0 / 3.0]).unwrap();
        s.push(2.5, &[f64::MIN_POSITIVE, 12345.678901234567]).unwrap();
        let back = DecaySeries::from_csv(&s.to_csv()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.meta_f64("box_half_width"), Some(60.0));
    }

    #[test]
    fn rejects_bad_rows() {
        let mut s = DecaySeries::with_columns(&["a"]);
        s.push(1.0, &[1.0]).unwrap();
        assert!(s.push(1.0, &[1.0]).is_err());
        assert!(s.push(2.0, &[1.0, 2.0]).is_err());
        match DecaySeries::from_csv("t,a\n1,2\n2,x\n") {
            Err(LabError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(DecaySeries::from_csv("t,a\n1,2,3\n"), Err(LabError::Parse { line: 2, .. })));
        assert!(DecaySeries::from_csv("# only=meta\n").is_err());
    }
}
