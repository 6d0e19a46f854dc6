use serde::{Deserialize, Serialize};

use super::bh::{c_constant_closed, c_constant_recursive};
use super::exponents::bh_exponent;
use crate::error::Result;
use crate::format::{sig17, to_json_string};
use crate::tensor::Field;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRow {
    pub m: usize,
    pub t: f64,
    pub field: Field,
    pub exponent: f64,
    #[serde(rename = "C_recursive")]
    pub c_recursive: f64,
    #[serde(rename = "C_closed")]
    pub c_closed: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub build: String,
    pub closed_form: String,
    pub tolerance: f64,
}

/// Table of `C_{m,t}` by both routes, with the inequality exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<ConstantsRow>,
}

pub const CSV_HEADER: &str = "m,t,field,exponent,C_recursive,C_closed";

impl ConstantsReport {
    /// Rows ordered by field, then `t`, then `m`.
    pub fn generate(ms: &[usize], ts: &[f64], fields: &[Field]) -> Result<Self> {
        let mut rows = Vec::with_capacity(ms.len() * ts.len() * fields.len());
        for &field in fields {
            for &t in ts {
                for &m in ms {
                    rows.push(ConstantsRow {
                        m,
                        t,
                        field,
                        exponent: bh_exponent(m, t)?,
                        c_recursive: c_constant_recursive(m, t, field)?,
                        c_closed: c_constant_closed(m, t, field)?,
                    });
                }
            }
        }
        Ok(Self {
            metadata: ReportMetadata {
                build: concat!("bhsum-core ", env!("CARGO_PKG_VERSION")).to_string(),
                closed_form: "product".to_string(),
                tolerance: crate::INEQUALITY_REL_TOL,
            },
            rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.m,
                sig17(r.t),
                r.field,
                sig17(r.exponent),
                sig17(r.c_recursive),
                sig17(r.c_closed)
            ));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        to_json_string(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let report = ConstantsReport::generate(&[1, 2], &[1.0], &[Field::Complex]).unwrap();
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "1,1.0000000000000000,complex,1.0000000000000000,1.0000000000000000,1.0000000000000000");
        assert!(lines[2].starts_with("2,1.0000000000000000,complex,1.3333333333333333,1.128379167095512"));
    }

    #[test]
    fn json_records() {
        let report = ConstantsReport::generate(&[2, 3, 4], &[1.0, 1.5], &[Field::Real]).unwrap();
        let parsed: ConstantsReport = serde_json::from_str(&report.to_json().unwrap()).unwrap();
        assert_eq!(parsed.rows.len(), 6);
        assert_eq!(parsed, report);
    }
}
