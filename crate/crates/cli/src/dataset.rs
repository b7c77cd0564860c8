//! The `count,frequency` dataset format.
//!
//! ```text
//! # truncated_at_zero=true
//! count,frequency
//! 1,18
//! 2,35
//! ```
//!
//! Lines starting with `#` are comments; the only recognised metadata key is
//! `truncated_at_zero`. Rows may come in any order but each count may appear
//! once.

use std::fmt;
use std::path::Path;

use mcmpb_core::FrequencyData;

pub const HEADER: &str = "count,frequency";

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetError {
    Io(String),
    Empty,
    /// `line` and `column` are 1-based.
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Invalid(String),
}

impl fmt::Display for DatasetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io(m) => write!(f, "{m}"),
            Self::Empty => write!(f, "dataset is empty"),
            Self::Parse {
                line,
                column,
                message,
            } => write!(f, "line {line}, column {column}: {message}"),
            Self::Invalid(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for DatasetError {}

fn at(line: usize, column: usize, message: impl Into<String>) -> DatasetError {
    DatasetError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Column of the first non-blank character at or after byte `start`.
fn column_of(raw: &str, start: usize) -> usize {
    let lead = raw[start..].len() - raw[start..].trim_start().len();
    raw[..start + lead].chars().count() + 1
}

pub fn parse(text: &str) -> Result<FrequencyData, DatasetError> {
    let mut truncated = false;
    let mut header_seen = false;
    let mut rows: Vec<(usize, u64, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "truncated_at_zero" {
                    truncated = match value.trim() {
                        "true" => true,
                        "false" => false,
                        other => {
                            let col = column_of(raw, raw.find('=').unwrap() + 1);
                            return Err(at(
                                line,
                                col,
                                format!("expected true or false, got `{other}`"),
                            ));
                        }
                    };
                }
            }
            continue;
        }
        if !header_seen {
            if trimmed != HEADER {
                return Err(at(
                    line,
                    column_of(raw, 0),
                    format!("expected header `{HEADER}`"),
                ));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 2 {
            let col = if fields.len() > 2 {
                column_of(raw, fields[0].len() + fields[1].len() + 2)
            } else {
                raw.chars().count() + 1
            };
            return Err(at(
                line,
                col,
                format!("expected 2 fields, found {}", fields.len()),
            ));
        }
        let count = fields[0].trim().parse::<usize>().map_err(|_| {
            at(
                line,
                column_of(raw, 0),
                format!("count `{}` is not a nonnegative integer", fields[0].trim()),
            )
        })?;
        let freq_col = column_of(raw, fields[0].len() + 1);
        let freq = fields[1].trim().parse::<u64>().map_err(|_| {
            at(
                line,
                freq_col,
                format!(
                    "frequency `{}` is not a nonnegative integer",
                    fields[1].trim()
                ),
            )
        })?;
        if let Some(prev) = rows.iter().find(|r| r.0 == count) {
            return Err(at(
                line,
                column_of(raw, 0),
                format!("count {count} already given on line {}", prev.2),
            ));
        }
        rows.push((count, freq, line));
    }
    if !header_seen {
        return Err(DatasetError::Empty);
    }
    if rows.is_empty() {
        return Err(DatasetError::Invalid("dataset has no rows".into()));
    }
    rows.sort_by_key(|r| r.0);
    if truncated {
        if let Some(row) = rows.iter().find(|r| r.0 == 0 && r.1 > 0) {
            return Err(at(
                row.2,
                1,
                "count 0 is not allowed in zero-truncated data",
            ));
        }
        rows.retain(|r| r.0 > 0);
    }
    FrequencyData::new(rows.into_iter().map(|r| (r.0, r.1)).collect(), truncated)
        .map_err(|e| DatasetError::Invalid(e.to_string()))
}

pub fn read(path: &Path) -> Result<FrequencyData, DatasetError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| DatasetError::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn write(data: &FrequencyData) -> String {
    let mut out = String::new();
    if data.truncated_at_zero() {
        out.push_str("# truncated_at_zero=true\n");
    }
    out.push_str(HEADER);
    out.push('\n');
    for (x, f) in data.counts() {
        out.push_str(&format!("{x},{f}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_metadata_and_any_order() {
        let data = parse("# truncated_at_zero=true\ncount,frequency\n3,4\n1, 2\n\n2,0\n").unwrap();
        assert!(data.truncated_at_zero());
        assert_eq!(data.counts(), &[(1, 2), (2, 0), (3, 4)]);
        assert_eq!(parse(&write(&data)).unwrap(), data);
    }

    #[test]
    fn errors_are_positional() {
        assert_eq!(parse(""), Err(DatasetError::Empty));
        assert_eq!(parse("# just a comment\n"), Err(DatasetError::Empty));
        let pos = |text: &str| match parse(text) {
            Err(DatasetError::Parse { line, column, .. }) => (line, column),
            other => panic!("{other:?}"),
        };
        assert_eq!(pos("count,freq\n"), (1, 1));
        assert_eq!(pos("count,frequency\n0,1\n1,-3\n"), (3, 3));
        assert_eq!(pos("count,frequency\n10, x\n"), (2, 5));
        assert_eq!(pos("count,frequency\n1.5,2\n"), (2, 1));
        assert_eq!(pos("count,frequency\n1\n"), (2, 2));
        assert_eq!(pos("count,frequency\n1,2,3\n"), (2, 5));
        assert_eq!(pos("count,frequency\n1,2\n1,3\n"), (3, 1));
        assert_eq!(
            pos("# truncated_at_zero=maybe\ncount,frequency\n1,2\n"),
            (1, 21)
        );
        assert_eq!(
            pos("# truncated_at_zero=true\ncount,frequency\n0,2\n"),
            (3, 1)
        );
    }

    #[test]
    fn rejects_all_zero_frequencies() {
        assert!(matches!(
            parse("count,frequency\n0,0\n"),
            Err(DatasetError::Invalid(_))
        ));
        assert!(matches!(
            parse("count,frequency\n"),
            Err(DatasetError::Invalid(_))
        ));
    }
}
