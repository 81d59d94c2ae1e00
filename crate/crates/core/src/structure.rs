//! Structure files: a TOML description of a polynomial frame with optional
//! weights, density log-gradient and asserted hypotheses.
//!
//! ```toml
//! name = "grushin"
//! dimension = 2
//! fields = ["dx", "x*dy"]
//! weights = [1, 2]
//! density_log_grad = ["1/x", "0"]
//!
//! [assertions]
//! complete = true
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::srframe::{FrameError, SRFrame};
use crate::symcore::{parse_operator, parse_rational_function, RationalFunction, SymError, WeightVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("{path}: cannot read: {msg}")]
    Io { path: String, msg: String },
    #[error("{path}:{line}:{col}: {msg}")]
    Syntax { path: String, line: usize, col: usize, msg: String },
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assertions {
    /// User-asserted completeness of the metric space; never inferred.
    #[serde(default)]
    pub complete: bool,
}

/// The raw file contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub name: String,
    pub dimension: usize,
    pub fields: Vec<String>,
    #[serde(default)]
    pub weights: Option<Vec<u32>>,
    #[serde(default)]
    pub density_log_grad: Option<Vec<String>>,
    #[serde(default)]
    pub assertions: Assertions,
}

/// A parsed structure: exact frame plus metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub frame: SRFrame,
    pub weights: Option<WeightVector>,
    pub density_log_grad: Option<Vec<RationalFunction>>,
    pub assertions: Assertions,
    pub source: String,
}

impl Structure {
    pub fn name(&self) -> &str {
        self.frame.name()
    }

    pub fn density(&self) -> Option<&[RationalFunction]> {
        self.density_log_grad.as_deref()
    }
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// Locates `expr` as a quoted string in `src` and shifts an expression-relative column.
fn expression_location(src: &str, expr: &str, col: usize) -> Option<(usize, usize)> {
    let offset = src.find(&format!("\"{expr}\""))? + 1;
    let (line, c) = line_col(src, offset);
    Some((line, c + col - 1))
}

pub fn parse_structure_str(src: &str, path: &str) -> Result<Structure, StructureError> {
    let file: StructureFile = toml::from_str(src).map_err(|e| {
        let (line, col) = e.span().map_or((1, 1), |s| line_col(src, s.start));
        StructureError::Syntax { path: path.to_string(), line, col, msg: e.message().trim().to_string() }
    })?;
    let n = file.dimension;
    let invalid = |msg: String| StructureError::Invalid { path: path.to_string(), msg };
    let located = |expr: &str, e: SymError| match e {
        SymError::Parse { col, msg, .. } => match expression_location(src, expr, col) {
            Some((line, col)) => StructureError::Syntax { path: path.to_string(), line, col, msg },
            None => invalid(format!("{expr:?}: {msg}")),
        },
        other => invalid(format!("{expr:?}: {other}")),
    };
    if n == 0 {
        return Err(invalid("dimension must be positive".into()));
    }
    let mut fields = Vec::with_capacity(file.fields.len());
    for expr in &file.fields {
        let op = parse_operator(expr, n).map_err(|e| located(expr, e))?;
        fields.push(op.to_vector_field().map_err(|e| located(expr, e))?);
    }
    let frame = SRFrame::new(file.name.clone(), fields).map_err(|e: FrameError| invalid(e.to_string()))?;
    let weights = match file.weights {
        Some(w) => {
            if w.len() != n {
                return Err(invalid(format!("weights have length {}, dimension is {n}", w.len())));
            }
            Some(WeightVector::new(w).map_err(|e| invalid(e.to_string()))?)
        }
        None => None,
    };
    let density_log_grad = match file.density_log_grad {
        Some(exprs) => {
            if exprs.len() != n {
                return Err(invalid(format!("density_log_grad has length {}, dimension is {n}", exprs.len())));
            }
            Some(
                exprs
                    .iter()
                    .map(|e| parse_rational_function(e, n).map_err(|err| located(e, err)))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
        None => None,
    };
    Ok(Structure { frame, weights, density_log_grad, assertions: file.assertions, source: path.to_string() })
}

pub fn parse_structure(path: &Path) -> Result<Structure, StructureError> {
    let shown = path.display().to_string();
    let src = std::fs::read_to_string(path).map_err(|e| StructureError::Io { path: shown.clone(), msg: e.to_string() })?;
    parse_structure_str(&src, &shown)
}

/// Structure files shipped with the crate, as `(file name, contents)`.
pub const BUNDLED: &[(&str, &str)] = &[
    ("euclidean2.toml", include_str!("../structures/euclidean2.toml")),
    ("grushin.toml", include_str!("../structures/grushin.toml")),
    ("heisenberg.toml", include_str!("../structures/heisenberg.toml")),
    ("martinet.toml", include_str!("../structures/martinet.toml")),
];

/// Parses a bundled structure by file name, with or without the `.toml` suffix.
pub fn bundled(name: &str) -> Option<Structure> {
    let key = if name.ends_with(".toml") { name.to_string() } else { format!("{name}.toml") };
    BUNDLED
        .iter()
        .find(|(n, _)| *n == key)
        .map(|(n, src)| parse_structure_str(src, n).expect("bundled structures parse"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::srframe::standard;

    #[test]
    fn bundled_frames_match_standard() {
        assert_eq!(bundled("grushin").unwrap().frame.fields(), standard::grushin().fields());
        assert_eq!(bundled("heisenberg.toml").unwrap().frame.fields(), standard::heisenberg().fields());
        assert_eq!(bundled("euclidean2").unwrap().frame.fields(), standard::euclidean(2).fields());
        assert_eq!(bundled("martinet").unwrap().frame.fields(), standard::martinet().fields());
        let g = bundled("grushin").unwrap();
        assert!(g.assertions.complete);
        assert_eq!(g.weights.unwrap().as_slice(), &[1, 2]);
        assert_eq!(g.density_log_grad.unwrap()[0].to_string(), "1/x");
    }

    #[test]
    fn malformed_exponent_is_located() {
        let src = "name = \"bad\"\ndimension = 2\nfields = [\"dx\", \"x^-1*dy\"]\n";
        match parse_structure_str(src, "bad.toml") {
            Err(StructureError::Syntax { line, col, .. }) => assert_eq!((line, col), (3, 20)),
            other => panic!("expected located syntax error, got {other:?}"),
        }
    }

    #[test]
    fn toml_errors_are_located() {
        let src = "name = \"bad\"\ndimension = \n";
        assert!(matches!(
            parse_structure_str(src, "bad.toml"),
            Err(StructureError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn invalid_structures() {
        let dim = "name = \"e\"\ndimension = 2\nfields = [\"dx\"]\nweights = [1]\n";
        assert!(matches!(parse_structure_str(dim, "e.toml"), Err(StructureError::Invalid { .. })));
        let second_order = "name = \"e\"\ndimension = 2\nfields = [\"dx^2\"]\n";
        assert!(matches!(parse_structure_str(second_order, "e.toml"), Err(StructureError::Invalid { .. })));
        let unknown = "name = \"e\"\ndimension = 1\nfields = [\"dx\"]\ncolour = 3\n";
        assert!(parse_structure_str(unknown, "e.toml").is_err());
        assert!(matches!(parse_structure(Path::new("/nonexistent.toml")), Err(StructureError::Io { .. })));
    }
}
