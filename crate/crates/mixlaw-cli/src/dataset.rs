//! CSV ingestion for `fit` and CSV emission for `sweep`.
//!
//! Input format: header `a1,...,an,s1,...,sn,measured`, one sample per row,
//! `#` comments and blank lines ignored. A file with no significant lines
//! parses as an empty dataset; rejecting that is the fit layer's call.

use std::path::Path;

use crate::errors::CliError;
use mixlaw::fit::{Dataset, Sample};
use mixlaw::mean::MixResult;
use mixlaw::{Composition, PhaseValues};

fn data_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Data {
        line: Some(line),
        msg: msg.into(),
    }
}

/// Checks `a1,...,an,s1,...,sn,measured` and returns the phase count `n`.
fn parse_header(line: usize, cols: &[&str]) -> Result<usize, CliError> {
    let bad = |msg: String| Err(data_err(line, msg));
    if cols.len() < 3 || cols.len() % 2 == 0 {
        return bad(format!(
            "header must read a1,...,an,s1,...,sn,measured (odd column count >= 3, got {})",
            cols.len()
        ));
    }
    let n = (cols.len() - 1) / 2;
    for (i, col) in cols.iter().enumerate() {
        let want = if i < n {
            format!("a{}", i + 1)
        } else if i < 2 * n {
            format!("s{}", i + 1 - n)
        } else {
            "measured".to_owned()
        };
        if *col != want {
            return bad(format!("header column {} is '{col}', expected '{want}'", i + 1));
        }
    }
    Ok(n)
}

fn parse_row(line: usize, cols: &[&str], n: usize) -> Result<Sample, CliError> {
    if cols.len() != 2 * n + 1 {
        return Err(data_err(
            line,
            format!("expected {} columns, got {}", 2 * n + 1, cols.len()),
        ));
    }
    let mut nums = Vec::with_capacity(cols.len());
    for col in cols {
        let x: f64 = col
            .parse()
            .map_err(|_| data_err(line, format!("'{col}' is not a number")))?;
        nums.push(x);
    }
    let comp = Composition::new(&nums[..n]).map_err(|e| data_err(line, e.to_string()))?;
    let vals = PhaseValues::new(&nums[n..2 * n]).map_err(|e| data_err(line, e.to_string()))?;
    Sample::new(comp, vals, nums[2 * n]).map_err(|e| data_err(line, e.to_string()))
}

pub fn parse_dataset(text: &str) -> Result<Dataset, CliError> {
    let mut n: Option<usize> = None;
    let mut samples = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        match n {
            None => n = Some(parse_header(line, &cols)?),
            Some(n) => samples.push(parse_row(line, &cols, n)?),
        }
    }
    Ok(Dataset::new(samples))
}

/// One row per grid point: `{variable},{value},{flags}`, flags joined with
/// `;` so the row splits cleanly on commas. LF line endings, trailing
/// newline, fully determined by the inputs.
pub fn write_sweep_csv(
    path: &Path,
    var_name: &str,
    rows: &[(f64, MixResult)],
) -> Result<(), CliError> {
    let mut out = format!("{var_name},value,flags\n");
    for (x, res) in rows {
        let flags = res.flags.to_string().replace(',', ";");
        out.push_str(&format!("{x},{},{flags}\n", res.value));
    }
    std::fs::write(path, out).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mixlaw::mean::MixFlags;

    #[test]
    fn well_formed_file_parses_with_comments_and_blanks() {
        let text = "# porosity sweep\n\na1,a2,s1,s2,measured\n0.5,0.5,1,4,2.5\n\n# tail\n0.25,0.75,1,4,3.25\n";
        let ds = parse_dataset(text).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.samples()[1].measured(), 3.25);
    }

    #[test]
    fn no_significant_lines_is_an_empty_dataset() {
        assert!(parse_dataset("").unwrap().is_empty());
        assert!(parse_dataset("# only comments\n\n").unwrap().is_empty());
    }

    #[test]
    fn errors_carry_one_based_line_numbers() {
        let cases = [
            ("a1,s1,notmeasured\n", 1),                      // bad header name
            ("a1,a2,s1,s2\n", 1),                            // even column count
            ("a1,s1,measured\n1,2,3\nbroken\n", 3),          // short row
            ("a1,s1,measured\n1,two,3\n", 2),                // non-numeric
            ("a1,a2,s1,s2,measured\n0.9,0.3,1,2,1.5\n", 2),  // fractions sum to 1.2
        ];
        for (text, want_line) in cases {
            match parse_dataset(text) {
                Err(CliError::Data { line, .. }) => assert_eq!(line, Some(want_line), "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn sweep_rows_join_flags_with_semicolons() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        let rows = vec![
            (
                -1.0,
                MixResult {
                    value: 1.6,
                    flags: MixFlags::default(),
                },
            ),
            (
                0.0,
                MixResult {
                    value: 2.0,
                    flags: MixFlags {
                        geometric_limit_used: true,
                        rescaled_for_stability: true,
                        ..MixFlags::default()
                    },
                },
            ),
        ];
        write_sweep_csv(&path, "p", &rows).unwrap();
        let got = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            got,
            "p,value,flags\n-1,1.6,\n0,2,GeometricLimitUsed;RescaledForStability\n"
        );
    }
}
