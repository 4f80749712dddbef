use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::run::{SweepRow, SweepSummary};

pub const CSV_HEADER: &str = "family,p,m,d_spec,case,max_abs,witness_a,witness_b,bound,ratio,informative";

/// The CSV document: a `# seed=<n>` line, the header, one line per row.
pub fn csv_string(rows: &[SweepRow], seed: u64) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::NothingToEmit);
    }
    let mut out = format!("# seed={seed}\n{CSV_HEADER}\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{:.12},{},{},{:.12},{:.12},{}",
            r.family, r.p, r.m, r.d_spec, r.case, r.max_abs, r.witness_a, r.witness_b, r.bound, r.ratio, r.informative
        )
        .expect("writing to a String cannot fail");
    }
    Ok(out)
}

pub fn emit_csv(rows: &[SweepRow], seed: u64, path: &Path) -> Result<()> {
    write(path, &csv_string(rows, seed)?)
}

pub fn json_string(summary: &SweepSummary) -> Result<String> {
    serde_json::to_string_pretty(summary).map_err(|e| Error::param(format!("cannot serialize summary: {e}")))
}

pub fn emit_json(summary: &SweepSummary, path: &Path) -> Result<()> {
    if summary.rows == 0 {
        return Err(Error::NothingToEmit);
    }
    write(path, &(json_string(summary)? + "\n"))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{BoundCase, Formula};

    fn row() -> SweepRow {
        SweepRow {
            family: "kloosterman".into(),
            p: 7,
            m: 2,
            d_spec: "-".into(),
            case: BoundCase::Mixed,
            max_abs: 2.737_509_672_573_767,
            witness_a: 1,
            witness_b: 3,
            bound: 2.0 * 7f64.sqrt(),
            ratio: 2.737_509_672_573_767 / (2.0 * 7f64.sqrt()),
            informative: true,
            effective_bound: 3.0,
            formula: Formula::KloostermanSubgroup,
            violated: false,
            d_key: (0, 1, 0),
        }
    }

    #[test]
    fn csv_format() {
        let text = csv_string(&[row()], 42).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# seed=42");
        assert_eq!(lines[1], CSV_HEADER);
        assert_eq!(lines[2], "kloosterman,7,2,-,mixed,2.737509672574,1,3,5.291502622129,0.517340700376,true");
        assert_eq!(csv_string(&[], 0), Err(Error::NothingToEmit));
        assert_eq!(Error::NothingToEmit.to_string(), "nothing to emit");
    }

    #[test]
    fn unwritable_path_is_echoed() {
        let err = emit_csv(&[row()], 0, Path::new("/nonexistent/dir/out.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/out.csv"));
    }
}
