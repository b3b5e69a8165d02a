//! Dataset files.
//!
//! A dataset is a JSON document:
//!
//! ```json
//! {
//!   "dimension": 4,
//!   "fixed_points": [
//!     { "id": "P0", "weights": [1, 3], "moment": 0 },
//!     { "id": "P1", "weights": [-1, 2], "moment": "1/2" }
//!   ],
//!   "synthetic_moments": true
//! }
//! ```
//!
//! `dimension` is the real dimension `2n`. Each point lists exactly `n`
//! nonzero integer weights. `moment` is optional and is either a JSON integer
//! or a string `"p"` / `"p/q"`; it is written as an integer whenever it is one
//! and fits in 64 bits. `synthetic_moments` is omitted when false. Unknown
//! fields are rejected. Output is pretty-printed with two-space indentation and
//! a trailing newline, so writing a parsed file that this module produced
//! gives back the same bytes.

use std::path::Path;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational};
use crate::model::{validate, FixedPoint, FixedPointData, ValidationReport};
use crate::report::DatasetSummary;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetDoc {
    dimension: u64,
    fixed_points: Vec<PointDoc>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    synthetic_moments: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointDoc {
    id: String,
    weights: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    moment: Option<MomentDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MomentDoc {
    Int(i64),
    Text(String),
}

impl MomentDoc {
    fn from_rational(q: &BigRational) -> Self {
        match q.is_integer().then(|| q.to_integer().to_i64()).flatten() {
            Some(v) => MomentDoc::Int(v),
            None => MomentDoc::Text(fmt_rational(q)),
        }
    }

    fn to_rational(&self) -> Result<BigRational> {
        match self {
            MomentDoc::Int(v) => Ok(BigRational::from_integer((*v).into())),
            MomentDoc::Text(s) => parse_rational(s),
        }
    }
}

fn parse_doc(text: &str) -> Result<(usize, Vec<FixedPoint>, bool)> {
    let doc: DatasetDoc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if doc.dimension == 0 || !doc.dimension.is_multiple_of(2) {
        return Err(Error::Malformed(format!("dimension must be a positive even integer, got {}", doc.dimension)));
    }
    let n = usize::try_from(doc.dimension / 2).map_err(|_| Error::Malformed("dimension too large".into()))?;
    let points = doc
        .fixed_points
        .into_iter()
        .map(|p| {
            let moment = p.moment.as_ref().map(MomentDoc::to_rational).transpose()?;
            let mut fp = FixedPoint::new(p.id, p.weights);
            fp.moment = moment;
            Ok(fp)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((n, points, doc.synthetic_moments))
}

pub fn parse_dataset(text: &str) -> Result<FixedPointData> {
    let (n, points, synthetic) = parse_doc(text)?;
    Ok(FixedPointData::new(n, points)?.with_synthetic_moments(synthetic))
}

pub fn write_dataset(data: &FixedPointData) -> String {
    let doc = DatasetDoc {
        dimension: 2 * data.n() as u64,
        fixed_points: data
            .points()
            .iter()
            .map(|p| PointDoc {
                id: p.id.clone(),
                weights: p.weights.clone(),
                moment: p.moment.as_ref().map(MomentDoc::from_rational),
            })
            .collect(),
        synthetic_moments: data.synthetic_moments(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("dataset documents always serialize");
    out.push('\n');
    out
}

pub fn load_dataset(path: &Path) -> Result<FixedPointData> {
    parse_dataset(&read(path)?)
}

/// Validates a document that may contain zero weights. Any other structural
/// problem (bad JSON, odd dimension, wrong weight count, duplicate ids) is an error.
pub fn validate_document(text: &str) -> Result<(DatasetSummary, ValidationReport)> {
    let (n, points, _) = parse_doc(text)?;
    let data = FixedPointData::with_zero_weights(n, points)?;
    Ok((DatasetSummary::of(&data), validate(&data)))
}

pub fn validate_file(path: &Path) -> Result<(DatasetSummary, ValidationReport)> {
    validate_document(&read(path)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{gen_product, gen_standard_cpn, gen_standard_cpn_with_moments};

    #[test]
    fn round_trip_is_byte_identical() {
        let cp3 = gen_standard_cpn_with_moments(&[0, 1, 2, 4]).unwrap();
        let prod = gen_product(&gen_standard_cpn(&[0, 1]).unwrap(), &gen_standard_cpn(&[0, 2]).unwrap()).unwrap();
        for d in [cp3, prod] {
            let text = write_dataset(&d);
            let back = parse_dataset(&text).unwrap();
            assert_eq!(back, d);
            assert_eq!(write_dataset(&back), text);
        }
    }

    #[test]
    fn layout() {
        let text = write_dataset(&gen_standard_cpn_with_moments(&[0, 1]).unwrap());
        let expected = r#"{
  "dimension": 2,
  "fixed_points": [
    {
      "id": "P0",
      "weights": [
        1
      ],
      "moment": 0
    },
    {
      "id": "P1",
      "weights": [
        -1
      ],
      "moment": 1
    }
  ],
  "synthetic_moments": true
}
"#;
        assert_eq!(text, expected);
    }

    #[test]
    fn rational_and_string_moments() {
        let text = r#"{"dimension": 2, "fixed_points": [
            {"id": "A", "weights": [2], "moment": "-1/2"},
            {"id": "B", "weights": [-2], "moment": "3"}]}"#;
        let d = parse_dataset(text).unwrap();
        assert_eq!(d.points()[0].moment, Some(BigRational::new((-1).into(), 2.into())));
        let out = write_dataset(&d);
        assert!(out.contains(r#""moment": "-1/2""#));
        assert!(out.contains(r#""moment": 3"#));
    }

    #[test]
    fn malformed_documents() {
        for bad in [
            "not json",
            r#"{"dimension": 3, "fixed_points": []}"#,
            r#"{"dimension": 2, "fixed_points": [{"id": "A", "weights": [1, 2]}]}"#,
            r#"{"dimension": 2, "fixed_points": [{"id": "A", "weights": [1]}, {"id": "A", "weights": [-1]}]}"#,
            r#"{"dimension": 2, "fixed_points": [], "extra": 1}"#,
            r#"{"dimension": 2, "fixed_points": [{"id": "A", "weights": [1.5]}]}"#,
            r#"{"dimension": 2, "fixed_points": [{"id": "A", "weights": [1], "moment": "1/0"}]}"#,
        ] {
            assert!(parse_dataset(bad).is_err(), "{bad}");
            assert!(validate_document(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn zero_weights_are_flagged() {
        let text = r#"{"dimension": 2, "fixed_points": [{"id": "A", "weights": [0]}, {"id": "B", "weights": [0]}]}"#;
        assert!(parse_dataset(text).is_err());
        let (summary, r) = validate_document(text).unwrap();
        assert_eq!(summary.points, 2);
        assert!(!r.nonzero_ok);
        assert!(r.hattori_ok);
        assert!(!r.is_ok());
    }
}
