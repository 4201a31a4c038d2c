//! The function input document shared by the CLI and file-based callers.
//!
//! A single JSON document with a `kind` tag:
//!
//! ```json
//! {"kind": "grid1d",  "half_width": 12.0, "point_count": 1024, "values": [...]}
//! {"kind": "gridnd",  "dimension": 2, "half_width": 8.0, "point_count": 64, "values": [...]}
//! {"kind": "radial",  "dimension": 3, "max_radius": 10.0, "point_count": 256, "values": [...]}
//! {"kind": "hermite", "coefficients": [...]}
//! {"kind": "expr",    "source": "exp(-x^2/2)", "dimension": 1,
//!                     "target": {"kind": "grid1d", "half_width": 12.0, "point_count": 1024}}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exprdsl;
use crate::funcrep::{Descriptor, SampledFunction};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FunctionDoc {
    #[serde(rename = "grid1d")]
    Grid1D {
        half_width: f64,
        point_count: usize,
        values: Vec<f64>,
    },
    #[serde(rename = "gridnd")]
    GridND {
        dimension: usize,
        half_width: f64,
        point_count: usize,
        values: Vec<f64>,
    },
    Radial {
        dimension: usize,
        max_radius: f64,
        point_count: usize,
        values: Vec<f64>,
    },
    Hermite { coefficients: Vec<f64> },
    Expr {
        source: String,
        dimension: usize,
        target: Descriptor,
    },
}

impl FunctionDoc {
    pub fn into_function(self) -> Result<SampledFunction> {
        match self {
            FunctionDoc::Grid1D {
                half_width,
                point_count,
                values,
            } => {
                expect_count(point_count, values.len())?;
                SampledFunction::grid1d(half_width, values)
            }
            FunctionDoc::GridND {
                dimension,
                half_width,
                point_count,
                values,
            } => SampledFunction::grid_nd(dimension, half_width, point_count, values),
            FunctionDoc::Radial {
                dimension,
                max_radius,
                point_count,
                values,
            } => {
                expect_count(point_count, values.len())?;
                SampledFunction::radial(dimension, max_radius, values)
            }
            FunctionDoc::Hermite { coefficients } => SampledFunction::hermite(coefficients),
            FunctionDoc::Expr {
                source,
                dimension,
                target,
            } => {
                let expr = exprdsl::parse(&source, dimension)?;
                exprdsl::sample(&expr, &target)
            }
        }
    }

    pub fn from_path(path: &std::path::Path) -> Result<FunctionDoc> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn expect_count(declared: usize, actual: usize) -> Result<()> {
    if declared != actual {
        return Err(Error::InvalidInput(format!(
            "point_count {declared} does not match {actual} values"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_document_round_trip() {
        let doc: FunctionDoc = serde_json::from_str(
            r#"{"kind":"hermite","coefficients":[1.0,0.0,0.5]}"#,
        )
        .unwrap();
        let u = doc.into_function().unwrap();
        assert_eq!(u.raw(), &[1.0, 0.0, 0.5]);
    }

    #[test]
    fn expr_document_samples() {
        let doc: FunctionDoc = serde_json::from_str(
            r#"{"kind":"expr","source":"exp(-x^2/2)","dimension":1,
                "target":{"kind":"grid1d","half_width":12.0,"point_count":256}}"#,
        )
        .unwrap();
        let u = doc.into_function().unwrap();
        assert_eq!(u.raw().len(), 256);
    }

    #[test]
    fn mismatched_count_is_rejected() {
        let doc: FunctionDoc = serde_json::from_str(
            r#"{"kind":"grid1d","half_width":4.0,"point_count":32,"values":[0.0,0.0]}"#,
        )
        .unwrap();
        assert!(doc.into_function().is_err());
    }

    #[test]
    fn bad_expr_reports_parse_error() {
        let doc: FunctionDoc = serde_json::from_str(
            r#"{"kind":"expr","source":"x1*x2","dimension":1,
                "target":{"kind":"grid1d","half_width":4.0,"point_count":32}}"#,
        )
        .unwrap();
        assert!(matches!(doc.into_function(), Err(Error::Parse(_))));
    }
}
