use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{MultiPoly, VarietyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    /// Affine space with `dim` coordinates.
    Affine(usize),
    /// Projective space of dimension `dim`, with `dim + 1` homogeneous
    /// coordinates.
    Projective(usize),
}

impl Ambient {
    pub fn dim(&self) -> usize {
        match *self {
            Ambient::Affine(d) | Ambient::Projective(d) => d,
        }
    }

    /// Number of coordinates of a point.
    pub fn nvars(&self) -> usize {
        match *self {
            Ambient::Affine(d) => d,
            Ambient::Projective(d) => d + 1,
        }
    }

    pub fn is_projective(&self) -> bool {
        matches!(self, Ambient::Projective(_))
    }
}

/// A variety over Z given by integer polynomial equations. An empty
/// equation list is the whole ambient space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarietyPresentation {
    pub name: String,
    pub ambient: Ambient,
    pub polys: Vec<MultiPoly>,
    pub declared_smooth: Option<bool>,
}

#[derive(Serialize, Deserialize)]
struct AmbientFile {
    #[serde(rename = "type")]
    kind: String,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VarietyFile {
    name: String,
    ambient: AmbientFile,
    polys: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    smooth: Option<bool>,
}

impl VarietyPresentation {
    /// Validates homogeneity and variable ranges.
    pub fn new(
        name: impl Into<String>,
        ambient: Ambient,
        polys: Vec<MultiPoly>,
        declared_smooth: Option<bool>,
    ) -> Result<Self, VarietyError> {
        for (i, f) in polys.iter().enumerate() {
            if f.nvars() != ambient.nvars() {
                return Err(VarietyError::VariableOutOfRange {
                    index: f.nvars().saturating_sub(1),
                    nvars: ambient.nvars(),
                });
            }
            if ambient.is_projective() && !f.is_homogeneous() {
                return Err(VarietyError::NotHomogeneous(i));
            }
        }
        Ok(VarietyPresentation {
            name: name.into(),
            ambient,
            polys,
            declared_smooth,
        })
    }

    /// Builds a presentation from polynomial strings.
    pub fn from_strs(
        name: &str,
        ambient: Ambient,
        polys: &[&str],
        declared_smooth: Option<bool>,
    ) -> Result<Self, VarietyError> {
        let n = ambient.nvars();
        let polys = polys
            .iter()
            .map(|s| MultiPoly::parse(s, n))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(name, ambient, polys, declared_smooth)
    }

    pub fn nvars(&self) -> usize {
        self.ambient.nvars()
    }

    pub fn is_smooth_declared(&self) -> bool {
        self.declared_smooth == Some(true)
    }

    /// Canonical JSON serialization (no trailing newline).
    pub fn to_json(&self) -> String {
        let file = VarietyFile {
            name: self.name.clone(),
            ambient: AmbientFile {
                kind: if self.ambient.is_projective() { "projective" } else { "affine" }.into(),
                dim: self.ambient.dim(),
            },
            polys: self.polys.iter().map(|f| f.to_string()).collect(),
            smooth: self.declared_smooth,
        };
        serde_json::to_string(&file).expect("serializable")
    }

    /// Content hash over ambient, equations and smoothness flag; the name is
    /// excluded so renamed copies share cache entries.
    pub fn content_hash(&self) -> String {
        let mut unnamed = self.clone();
        unnamed.name.clear();
        hex::encode(Sha256::digest(unnamed.to_json().as_bytes()))
    }
}

/// Parses a variety-definition JSON document.
pub fn parse_variety(text: &str) -> Result<VarietyPresentation, VarietyError> {
    let file: VarietyFile =
        serde_json::from_str(text).map_err(|e| VarietyError::Json(e.to_string()))?;
    let ambient = match file.ambient.kind.as_str() {
        "affine" => Ambient::Affine(file.ambient.dim),
        "projective" => Ambient::Projective(file.ambient.dim),
        other => return Err(VarietyError::Json(format!("unknown ambient type {other:?}"))),
    };
    let polys: Vec<&str> = file.polys.iter().map(String::as_str).collect();
    VarietyPresentation::from_strs(&file.name, ambient, &polys, file.smooth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let fat = parse_variety(
            r#"{"name":"fat","ambient":{"type":"affine","dim":1},"polys":["x0^2"]}"#,
        )
        .unwrap();
        assert_eq!(fat.nvars(), 1);
        assert_eq!(fat.polys[0].to_string(), "x0^2");

        let p1 = parse_variety(
            r#"{"name":"P1","ambient":{"type":"projective","dim":1},"polys":[]}"#,
        )
        .unwrap();
        assert_eq!(p1.nvars(), 2);
        assert!(p1.polys.is_empty());

        let bad = parse_variety(
            r#"{"name":"bad","ambient":{"type":"projective","dim":2},"polys":["x0^2 + x1"]}"#,
        );
        assert!(matches!(bad, Err(VarietyError::NotHomogeneous(0))));

        let out_of_range = parse_variety(
            r#"{"name":"o","ambient":{"type":"affine","dim":1},"polys":["x1"]}"#,
        );
        assert!(matches!(out_of_range, Err(VarietyError::VariableOutOfRange { .. })));
        assert!(matches!(parse_variety("{"), Err(VarietyError::Json(_))));
    }

    #[test]
    fn canonical_serialization() {
        let v = parse_variety(
            r#"{"polys":["x2^3 + x0*x2^2 + x0^3 - x1^2*x2"],"smooth":true,
                "ambient":{"dim":2,"type":"projective"},"name":"E"}"#,
        )
        .unwrap();
        assert_eq!(
            v.to_json(),
            r#"{"name":"E","ambient":{"type":"projective","dim":2},"polys":["x0^3 + x0*x2^2 - x1^2*x2 + x2^3"],"smooth":true}"#
        );
        let mut renamed = v.clone();
        renamed.name = "other".into();
        assert_eq!(v.content_hash(), renamed.content_hash());
    }

    fn small_poly(nvars: usize) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(
            (-9i64..=9, proptest::collection::vec(0u32..3, nvars)),
            0..5,
        )
        .prop_map(move |terms| {
            MultiPoly::from_terms(nvars, terms.into_iter().map(|(c, e)| (c.into(), e)).collect())
        })
    }

    proptest! {
        #[test]
        fn parse_serialize_roundtrip(polys in proptest::collection::vec(small_poly(3), 0..3)) {
            let v = VarietyPresentation::new("t", Ambient::Affine(3), polys, None).unwrap();
            let again = parse_variety(&v.to_json()).unwrap();
            prop_assert_eq!(&again, &v);
            prop_assert_eq!(again.to_json(), v.to_json());
        }
    }
}
