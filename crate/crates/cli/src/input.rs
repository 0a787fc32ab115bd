//! Input parsing and the error type that decides the exit status.

use std::fmt;
use std::path::Path;

use dirichlet_moments::{DirichletParams, Error, KnotSet, MultiIndex};

#[derive(Debug)]
pub enum CliError {
    /// Malformed input; exit status 2.
    Usage(String),
    /// Raised by the library; exit status 1 unless the arguments were
    /// malformed.
    Inner(Error),
}

impl CliError {
    pub fn status(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Inner(Error::InvalidArgument(_)) => 2,
            CliError::Inner(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Inner(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Inner(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

pub fn finite(name: &str, values: &[f64]) -> CliResult<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => usage(format!("{name}[{i}] = {} is not finite", values[i])),
        None => Ok(()),
    }
}

pub fn multi_index(name: &str, text: &str) -> CliResult<MultiIndex> {
    text.parse()
        .map_err(|e: Error| CliError::Usage(format!("--{name}: {e}")))
}

/// Knots from CSV: one point per row, one column per coordinate, with an
/// optional header row.
pub fn read_knots(path: &Path) -> CliResult<KnotSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_knots(&text)
}

pub fn parse_knots(text: &str) -> CliResult<KnotSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut points: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Usage(format!("knot file: {e}")))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(p) => points.push(p),
            Err(_) if line == 0 => continue,
            Err(e) => return usage(format!("knot file row {}: {e}", line + 1)),
        }
    }
    if points.is_empty() {
        return usage("knot file has no rows");
    }
    for (i, p) in points.iter().enumerate() {
        finite(&format!("knot {i}"), p)?;
    }
    KnotSet::new(points).map_err(|e| CliError::Usage(format!("knot file: {e}")))
}

/// `ones` or a comma-separated list of positive reals.
pub fn params(text: &str, len: usize) -> CliResult<DirichletParams> {
    if text.trim() == "ones" {
        return Ok(DirichletParams::ones(len));
    }
    let b: Vec<f64> = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("--params entry `{p}`: {e}")))
        })
        .collect::<CliResult<_>>()?;
    finite("params", &b)?;
    if b.len() != len {
        return usage(format!("--params has {} entries for {len} knots", b.len()));
    }
    DirichletParams::new(b).map_err(CliError::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knots_with_and_without_header() {
        let k = parse_knots("x,y\n0,0\n1,0\n0,1\n").unwrap();
        assert_eq!(k.len(), 3);
        assert_eq!(k.dim(), 2);
        let k = parse_knots("0.5\n 1.5 \n\n2\n").unwrap();
        assert_eq!(k.coordinate_row(0), vec![0.5, 1.5, 2.0]);
    }

    #[test]
    fn malformed_knots_are_usage_errors() {
        for bad in ["", "x,y\n", "0,0\n1,zz\n", "0,0\n1\n", "0,inf\n1,1\n"] {
            assert_eq!(parse_knots(bad).unwrap_err().status(), 2, "{bad:?}");
        }
    }

    #[test]
    fn parameter_lists() {
        assert!(params("ones", 3).unwrap().is_ones());
        assert_eq!(params("1.5, 2", 2).unwrap().b(), &[1.5, 2.0]);
        assert_eq!(params("1,2", 3).unwrap_err().status(), 2);
        assert_eq!(params("1,x", 2).unwrap_err().status(), 2);
        // b_i > 0 is a precondition, not a syntax error.
        assert_eq!(params("1,-2", 2).unwrap_err().status(), 1);
    }
}
