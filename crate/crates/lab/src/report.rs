//! Serialized outputs. JSON documents carry `schema_version`; CSV headers
//! are fixed per table.

use std::path::{Path, PathBuf};

use gappath_core::coupling::IdentityReport;
use gappath_core::hammersley::LineSet;
use gappath_core::oracle::{ExactDist, IdentityCheck, Prob};
use gappath_core::{Cell, Point};
use serde::Serialize;
use serde_json::{json, Value};

use crate::io::{write_text, IoError};
use crate::mc::{CdfTable, Histogram, SizeRow, StatReport, SCHEMA_VERSION};

/// Exact masses become `"num/den"` strings, floating ones stay numbers.
pub fn prob_json(p: &Prob) -> Value {
    match p {
        Prob::Exact(_) => Value::String(p.to_string()),
        Prob::Approx(x) => json!(x),
    }
}

pub fn exact_dist_json(d: &ExactDist) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "support": d.support(),
        "mass": d.masses().iter().map(prob_json).collect::<Vec<_>>(),
        "truncated": d.is_truncated(),
        "tail_mass": prob_json(&d.tail_mass()),
    })
}

pub fn identity_check_json(c: &IdentityCheck) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "rows": c.rows.iter().map(|r| json!({
            "k": r.k,
            "lhs": prob_json(&r.lhs),
            "rhs": prob_json(&r.rhs),
            "equal": r.equal,
        })).collect::<Vec<_>>(),
        "max_discrepancy": c.max_discrepancy,
        "passed": c.passed(),
    })
}

pub fn identity_check_csv(c: &IdentityCheck) -> String {
    let mut s = String::from("k,lhs,rhs,equal\n");
    for r in &c.rows {
        s.push_str(&format!("{},{},{},{}\n", r.k, r.lhs, r.rhs, r.equal));
    }
    s
}

fn lines_json<T>(lines: &LineSet<T>, corner: impl Fn(&T) -> Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "lines": lines.lines().iter().map(|l| json!({
            "corners": l.corners().iter().map(&corner).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn point_lines_json(lines: &LineSet<Point>) -> Value {
    lines_json(lines, |p| json!([p.x, p.y]))
}

pub fn cell_lines_json(lines: &LineSet<Cell>) -> Value {
    lines_json(lines, |c| json!([c.i, c.j]))
}

fn to_csv<R: Serialize>(rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory CSV");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("CSV is UTF-8")
}

#[derive(Serialize)]
struct VerifyRow {
    k: u64,
    lhs_cdf: f64,
    rhs_cdf: f64,
    ci_lo: f64,
    ci_hi: f64,
    n_replicas: u64,
}

/// One row per `k`; `ci_lo, ci_hi` is the Wilson interval of the left CDF.
pub fn identity_report_csv(r: &IdentityReport) -> String {
    to_csv(r.rows.iter().map(|row| VerifyRow {
        k: row.k,
        lhs_cdf: row.lhs,
        rhs_cdf: row.rhs,
        ci_lo: row.lhs_ci.0,
        ci_hi: row.lhs_ci.1,
        n_replicas: r.replicas,
    }))
}

pub fn identity_report_json(r: &IdentityReport) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "replicas": r.replicas,
        "max_gap": r.max_gap,
        "band": r.band,
        "within_band": r.within_band(),
        "rows": r.rows.iter().map(|row| json!({
            "k": row.k,
            "lhs_cdf": row.lhs,
            "rhs_cdf": row.rhs,
            "lhs_ci": [row.lhs_ci.0, row.lhs_ci.1],
            "rhs_ci": [row.rhs_ci.0, row.rhs_ci.1],
        })).collect::<Vec<_>>(),
        "exact": r.exact.as_ref().map(identity_check_json),
    })
}

/// Header `n,mean,var,se,target,bias`.
pub fn sizes_csv(rows: &[SizeRow]) -> String {
    #[derive(Serialize)]
    struct Row {
        n: f64,
        mean: f64,
        var: f64,
        se: f64,
        target: Option<f64>,
        bias: Option<f64>,
    }
    to_csv(rows.iter().map(|r| Row {
        n: r.n,
        mean: r.mean,
        var: r.var,
        se: r.se,
        target: r.target,
        bias: r.bias,
    }))
}

/// Header `bin_lo,bin_hi,count`.
pub fn histogram_csv(h: &Histogram) -> String {
    to_csv(&h.bins)
}

/// Header `k,lhs,rhs,band`.
pub fn cdf_csv(t: &CdfTable) -> String {
    to_csv(&t.rows)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes `<prefix>.json`, `<prefix>_sizes.csv`, and when present
/// `<prefix>_hist.csv` and one `<prefix>_cdf_<i>.csv` per size.
pub fn write_stat_report(report: &StatReport, prefix: &Path) -> Result<Vec<PathBuf>, IoError> {
    let mut written = Vec::new();
    let mut put = |suffix: &str, text: String| -> Result<(), IoError> {
        let path = with_suffix(prefix, suffix);
        write_text(&path, &text)?;
        written.push(path);
        Ok(())
    };
    put(".json", serde_json::to_string_pretty(report).expect("report serializes") + "\n")?;
    if !report.rows.is_empty() {
        put("_sizes.csv", sizes_csv(&report.rows))?;
    }
    if let Some(h) = &report.histogram {
        put("_hist.csv", histogram_csv(h))?;
    }
    for (i, t) in report.cdf.iter().enumerate() {
        put(&format!("_cdf_{i}.csv"), cdf_csv(t))?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::Bin;
    use gappath_core::oracle::{exact_dist_gap_lis, ProbParam};
    use gappath_core::{LatticeGap, Serial};

    #[test]
    fn rationals_are_strings() {
        let d = exact_dist_gap_lis(1, 2, ProbParam::ratio(1, 2).unwrap(), LatticeGap::UNIT, &Serial).unwrap();
        let v = exact_dist_gap_lis(1, 2, ProbParam::real(0.5).unwrap(), LatticeGap::UNIT, &Serial).unwrap();
        assert_eq!(exact_dist_json(&d)["mass"], json!(["1/4", "3/4"]));
        assert_eq!(exact_dist_json(&v)["mass"], json!([0.25, 0.75]));
        assert_eq!(exact_dist_json(&d)["schema_version"], json!(1));
    }

    #[test]
    fn csv_headers_are_fixed() {
        let rows = [SizeRow {
            n: 10.0,
            replicas: 2,
            mean: 1.0,
            var: 0.5,
            se: 0.5,
            target: None,
            bias: None,
        }];
        assert_eq!(sizes_csv(&rows), "n,mean,var,se,target,bias\n10.0,1.0,0.5,0.5,,\n");
        let h = Histogram {
            size: 1.0,
            center: 0.0,
            scale: 1.0,
            standardized_mean: 0.0,
            standardized_var: 1.0,
            below: 0,
            above: 0,
            bins: vec![Bin {
                bin_lo: -1.0,
                bin_hi: 0.0,
                count: 3,
            }],
            ecdf: vec![1.0],
            ks_to_table: None,
        };
        assert_eq!(histogram_csv(&h), "bin_lo,bin_hi,count\n-1.0,0.0,3\n");
    }
}
