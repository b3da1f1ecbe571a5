//! On-disk surface description.
//!
//! ```json
//! { "name": "...", "curves": [{"name": "W"}], "gram": [["p/q"]],
//!   "boundary": {"W": "1/2"}, "polarization": {"L_xy": "3/2"},
//!   "points": [{"name": "O_z", "host": "L_xy", "sing": {"r": 4, "a": 1, "b": 1},
//!               "boundary_local": "1/8", "negative_support": {}}] }
//! ```
//!
//! Unknown fields are rejected at every level.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DivisorClass, IntersectionLattice, LogDelPezzo, PointOnCurve, QuotientSingularity};
use crate::algebra::{Matrix, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub name: String,
    pub curves: Vec<CurveSpec>,
    pub gram: Vec<Vec<Rational>>,
    pub boundary: BTreeMap<String, Rational>,
    pub polarization: BTreeMap<String, Rational>,
    pub points: Vec<PointSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingSpec {
    pub r: u64,
    pub a: i64,
    pub b: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub name: String,
    pub host: String,
    pub sing: SingSpec,
    pub boundary_local: Rational,
    #[serde(default)]
    pub negative_support: BTreeMap<String, Rational>,
}

impl SurfaceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::InvalidSurface(vec![format!("{path}: {}", e.into_inner())])
        })
    }

    pub fn from_surface(s: &LogDelPezzo) -> Self {
        let lattice = &s.lattice;
        let named = |d: &DivisorClass| -> BTreeMap<String, Rational> {
            d.coefficients()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lattice.name(i).to_string(), c.clone()))
                .collect()
        };
        SurfaceFile {
            name: s.name.clone(),
            curves: lattice
                .curves()
                .iter()
                .map(|c| CurveSpec { name: c.name.clone() })
                .collect(),
            gram: lattice.gram().to_rows(),
            boundary: named(&s.boundary),
            polarization: named(&s.polarization),
            points: s
                .points
                .iter()
                .map(|p| PointSpec {
                    name: p.name.clone(),
                    host: p.host.clone(),
                    sing: SingSpec {
                        r: p.sing.r,
                        a: p.sing.a,
                        b: p.sing.b,
                    },
                    boundary_local: p.boundary_local.clone(),
                    negative_support: p.in_negative_support.clone(),
                })
                .collect(),
        }
    }

    /// Structural conversion. Semantic checks (symmetry, ranges) are left to
    /// [`LogDelPezzo::validate`] so that they can be reported together.
    pub fn into_surface(self) -> Result<LogDelPezzo> {
        let n = self.curves.len();
        let mut problems = Vec::new();
        if self.gram.len() != n {
            problems.push(format!("gram: expected {n} rows, got {}", self.gram.len()));
        }
        for (i, row) in self.gram.iter().enumerate() {
            if row.len() != n {
                problems.push(format!("gram[{i}]: expected {n} entries, got {}", row.len()));
            }
        }
        let names: Vec<String> = self.curves.iter().map(|c| c.name.clone()).collect();
        for (field, map) in [("boundary", &self.boundary), ("polarization", &self.polarization)] {
            for key in map.keys() {
                if !names.contains(key) {
                    problems.push(format!("{field}.{key}: unknown curve"));
                }
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidSurface(problems));
        }
        let gram = Matrix::from_rows(self.gram)?;
        let lattice = IntersectionLattice::from_names(names, gram)?;
        let combine = |map: &BTreeMap<String, Rational>| -> Result<DivisorClass> {
            let terms: Vec<(&str, Rational)> = map.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
            lattice.divisor(&terms)
        };
        let boundary = combine(&self.boundary)?;
        let polarization = combine(&self.polarization)?;
        let points = self
            .points
            .into_iter()
            .map(|p| PointOnCurve {
                name: p.name,
                host: p.host,
                sing: QuotientSingularity::new(p.sing.r, p.sing.a, p.sing.b),
                boundary_local: p.boundary_local,
                in_negative_support: p.negative_support,
            })
            .collect();
        LogDelPezzo::new(&self.name, lattice, boundary, polarization, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "name": "line-pair",
        "curves": [{"name": "E"}, {"name": "H"}],
        "gram": [["-1", "1"], ["1", "0/1"]],
        "boundary": {},
        "polarization": {"E": "1/1", "H": "2/1"},
        "points": [{"name": "p", "host": "E", "sing": {"r": 1, "a": 1, "b": 1},
                    "boundary_local": "0/1"}]
    }"#;

    #[test]
    fn parses_minimal_surface() {
        let s = LogDelPezzo::from_json(MINIMAL).unwrap();
        assert_eq!(s.lattice.len(), 2);
        // (E + 2H)^2 = -1 + 4 = 3
        assert_eq!(s.volume_a2(), &Rational::from(3));
        assert!(s.validate().is_empty());
    }

    #[test]
    fn unknown_fields_report_their_path() {
        let text = MINIMAL.replace("\"boundary_local\"", "\"colour\": 1, \"boundary_local\"");
        let err = LogDelPezzo::from_json(&text).unwrap_err();
        let Error::InvalidSurface(msgs) = err else {
            panic!("wrong error")
        };
        assert!(msgs[0].starts_with("points[0]"), "{msgs:?}");
        assert!(msgs[0].contains("colour"), "{msgs:?}");
    }

    #[test]
    fn bad_rational_reports_gram_path() {
        let text = MINIMAL.replace("\"-1\"", "\"-1.0\"");
        let Error::InvalidSurface(msgs) = LogDelPezzo::from_json(&text).unwrap_err() else {
            panic!("wrong error")
        };
        assert!(msgs[0].starts_with("gram[0][0]"), "{msgs:?}");
    }

    #[test]
    fn ragged_gram_and_unknown_curve() {
        let text = MINIMAL
            .replace("[\"1\", \"0/1\"]", "[\"1\"]")
            .replace("\"boundary\": {}", "\"boundary\": {\"Q\": \"1/2\"}");
        let Error::InvalidSurface(msgs) = LogDelPezzo::from_json(&text).unwrap_err() else {
            panic!("wrong error")
        };
        assert!(msgs.iter().any(|m| m.starts_with("gram[1]")), "{msgs:?}");
        assert!(msgs.iter().any(|m| m.starts_with("boundary.Q")), "{msgs:?}");
    }
}
