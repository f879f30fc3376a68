//! Per-iteration convergence records and their CSV form.
//!
//! The CSV contract: header `t,gamma_ref,F,x_dist,lambda_norm`, UTF-8, LF
//! line endings, floats with 17 significant digits so values round-trip
//! bit-exactly. `x_dist` is empty when no reference solution was supplied.

use std::io::Write;
use std::path::Path;

pub const CSV_HEADER: &str = "t,gamma_ref,F,x_dist,lambda_norm";

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: u64,
    /// Reference step size at this iteration (coordinate 0 for
    /// per-coordinate schedules, the constant step for first order).
    pub gamma_ref: f64,
    pub f: f64,
    /// ‖x_t − x_ref‖ when a reference solution is configured.
    pub x_dist: Option<f64>,
    pub lambda_norm: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
}

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl Trace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last_f(&self) -> Option<f64> {
        self.rows.last().map(|r| r.f)
    }

    /// F at the first row with the given iteration index.
    pub fn f_at(&self, t: u64) -> Option<f64> {
        self.rows.iter().find(|r| r.t == t).map(|r| r.f)
    }

    pub fn x_dist_at(&self, t: u64) -> Option<f64> {
        self.rows.iter().find(|r| r.t == t).and_then(|r| r.x_dist)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::with_capacity(32 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.t.to_string());
            out.push(',');
            out.push_str(&fmt_float(row.gamma_ref));
            out.push(',');
            out.push_str(&fmt_float(row.f));
            out.push(',');
            if let Some(d) = row.x_dist {
                out.push_str(&fmt_float(d));
            }
            out.push(',');
            out.push_str(&fmt_float(row.lambda_norm));
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.to_csv_string().as_bytes())
    }
}

/// What the solvers record while iterating.
#[derive(Debug, Clone)]
pub struct TraceOptions {
    /// Record rows at iterations divisible by this stride (the final
    /// iteration is always recorded).
    pub every: u64,
    /// Reference x against which `x_dist` is reported.
    pub reference: Option<Vec<f64>>,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            every: 1,
            reference: None,
        }
    }
}

impl TraceOptions {
    pub fn every(stride: u64) -> Self {
        Self {
            every: stride.max(1),
            reference: None,
        }
    }

    pub fn with_reference(mut self, reference: Vec<f64>) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn should_record(&self, t: u64, last: u64) -> bool {
        let stride = self.every.max(1);
        t.is_multiple_of(stride) || t == last
    }

    pub fn x_dist(&self, x: &[f64]) -> Option<f64> {
        self.reference.as_ref().map(|r| {
            x.iter()
                .zip(r)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_seventeen_digits() {
        let trace = Trace {
            rows: vec![TraceRow {
                t: 3,
                gamma_ref: 0.1 + 0.2,
                f: std::f64::consts::PI,
                x_dist: None,
                lambda_norm: 1.0 / 3.0,
            }],
        };
        let csv = trace.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields[0], "3");
        assert_eq!(fields[3], "", "x_dist empty without a reference");
        assert_eq!(fields[2].parse::<f64>().unwrap(), std::f64::consts::PI);
        assert_eq!(fields[4].parse::<f64>().unwrap(), 1.0 / 3.0);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn stride_records_multiples_and_final_row() {
        let opts = TraceOptions::every(100);
        assert!(opts.should_record(100, 250));
        assert!(opts.should_record(200, 250));
        assert!(!opts.should_record(150, 250));
        assert!(opts.should_record(250, 250));
    }
}
