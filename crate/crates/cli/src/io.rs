//! CSV input and output.

use std::path::Path;

use anyhow::{bail, Context};
use hirota_core::spline::ComplexSpline;
use hirota_core::Complex64;

/// Writes `header` and `rows` (already formatted as numbers).
pub fn write_rows(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        if row.len() != header.len() {
            bail!("row has {} fields, header has {}", row.len(), header.len());
        }
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV with exactly the given header into rows of numbers.
pub fn read_rows(path: &Path, header: &[&str]) -> anyhow::Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let found: Vec<String> = r.headers()?.iter().map(|s| s.trim().to_string()).collect();
    if found != header {
        bail!(
            "{}: expected header `{}`, found `{}`",
            path.display(),
            header.join(","),
            found.join(",")
        );
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: record {}", path.display(), line + 1))?;
        let row = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("{}: record {} has a non-numeric field", path.display(), line + 1))?;
        if row.iter().any(|v| !v.is_finite()) {
            bail!("{}: record {} has a non-finite value", path.display(), line + 1);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Profile samples `x,re_q,im_q` as a spline that vanishes outside the sampled range.
pub fn read_profile(path: &Path) -> anyhow::Result<ComplexSpline> {
    let rows = read_rows(path, &["x", "re_q", "im_q"])?;
    if rows.len() < 4 {
        bail!("{}: a profile needs at least 4 rows", path.display());
    }
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let qs: Vec<Complex64> = rows.iter().map(|r| Complex64::new(r[1], r[2])).collect();
    ComplexSpline::new(xs, qs).with_context(|| format!("{}: x must be strictly increasing", path.display()))
}
